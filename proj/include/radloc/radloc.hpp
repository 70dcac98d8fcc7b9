// SPDX-License-Identifier: Apache-2.0
//
// radloc - orientation-aware RSS localisation using device radiation patterns
// Copyright (C) 2026 The radloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RADLOC_RADLOC_HPP
#define RADLOC_RADLOC_HPP

#include "attack.hpp"
#include "clustering.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "geometry.hpp"
#include "msemap.hpp"
#include "packet_sync.hpp"
#include "pattern.hpp"
#include "pattern_io.hpp"
#include "pipeline.hpp"
#include "random.hpp"
#include "scoring.hpp"
#include "simulator.hpp"
#include "survey.hpp"

#endif
