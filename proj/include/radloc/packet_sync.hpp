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

#ifndef RADLOC_PACKET_SYNC_HPP
#define RADLOC_PACKET_SYNC_HPP

#include "csv.hpp"
#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace radloc
{
    /// Content hash of a captured frame (SHA-256 sized).
    using PacketHash = std::array<std::uint8_t, 32>;

    /// Deterministic synthetic hash for simulated packets.
    inline PacketHash synthetic_hash(std::uint64_t key)
    {
        PacketHash h{};
        std::uint64_t x = key;
        for (size_t i = 0; i < h.size(); ++i)
        {
            if (i % 8 == 0)
            {
                x += 0x9e3779b97f4a7c15ULL;
                x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
                x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
                x ^= x >> 31;
            }
            h[i] = static_cast<std::uint8_t>(x >> (8 * (i % 8)));
        }
        return h;
    }

    inline std::string to_hex(const PacketHash &h)
    {
        static const char *digits = "0123456789abcdef";
        std::string s;
        for (auto b : h)
        {
            s += digits[b >> 4];
            s += digits[b & 15];
        }
        return s;
    }

    inline PacketHash hash_from_hex(const std::string &hex)
    {
        if (hex.size() != 64)
            throw Error("packet hash must be 64 hex digits");
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9')
                return c - '0';
            if (c >= 'a' && c <= 'f')
                return c - 'a' + 10;
            if (c >= 'A' && c <= 'F')
                return c - 'A' + 10;
            throw Error("invalid hex digit in packet hash");
        };
        PacketHash h{};
        for (size_t i = 0; i < h.size(); ++i)
            h[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
        return h;
    }

    struct ReceiverRecord
    {
        std::string receiver_id;
        PacketHash hash{};
        double timestamp = 0.0; ///< receiver-local clock, seconds
        double rss_dbm = 0.0;

        friend bool operator==(const ReceiverRecord &, const ReceiverRecord &) = default;
    };

    struct PacketObservation
    {
        PacketHash key{};
        double timestamp = 0.0; ///< median of member timestamps
        std::map<std::string, double> samples;

        friend bool operator==(const PacketObservation &, const PacketObservation &) = default;
    };

    struct MatchResult
    {
        std::vector<PacketObservation> observations;
        std::vector<ReceiverRecord> ambiguous;
    };

    /// Groups records that share a hash and whose timestamps fall within
    /// [t0, t0 + 2 * tolerance] of the earliest unassigned one. A receiver that
    /// contributes more than one record to a window cannot identify the packet
    /// uniquely; those records are reported as ambiguous instead.
    ///
    /// `records` may arrive in any interleaving, but each receiver's records
    /// must be in non-decreasing timestamp order.
    inline MatchResult match_packets(const std::vector<ReceiverRecord> &records, double tolerance = 0.005)
    {
        {
            std::map<std::string, double> last;
            for (const auto &r : records)
            {
                auto it = last.find(r.receiver_id);
                if (it != last.end() && r.timestamp < it->second)
                    throw UnsortedInput("records from receiver '" + r.receiver_id + "' are not time ordered");
                last[r.receiver_id] = r.timestamp;
            }
        }

        // Canonical order independent of the interleaving: (hash, time, receiver, per-receiver sequence).
        struct Item
        {
            const ReceiverRecord *rec;
            size_t seq;
        };
        std::map<std::string, size_t> seq_counter;
        std::vector<Item> items;
        items.reserve(records.size());
        for (const auto &r : records)
            items.push_back({&r, seq_counter[r.receiver_id]++});
        std::sort(items.begin(), items.end(), [](const Item &a, const Item &b) {
            return std::tie(a.rec->hash, a.rec->timestamp, a.rec->receiver_id, a.seq) <
                   std::tie(b.rec->hash, b.rec->timestamp, b.rec->receiver_id, b.seq);
        });

        MatchResult out;
        const double width = 2.0 * tolerance;
        size_t i = 0;
        while (i < items.size())
        {
            // records of one hash are contiguous and time ordered
            size_t end = i + 1;
            while (end < items.size() && items[end].rec->hash == items[i].rec->hash &&
                   items[end].rec->timestamp <= items[i].rec->timestamp + width)
                ++end;

            std::map<std::string, std::vector<const ReceiverRecord *>> by_rx;
            for (size_t j = i; j < end; ++j)
                by_rx[items[j].rec->receiver_id].push_back(items[j].rec);

            PacketObservation obs;
            obs.key = items[i].rec->hash;
            std::vector<double> times;
            for (const auto &[id, recs] : by_rx)
            {
                if (recs.size() > 1)
                {
                    for (const auto *r : recs)
                        out.ambiguous.push_back(*r);
                    continue;
                }
                obs.samples[id] = recs.front()->rss_dbm;
                times.push_back(recs.front()->timestamp);
            }
            if (!times.empty())
            {
                std::sort(times.begin(), times.end());
                const size_t n = times.size();
                obs.timestamp = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
                out.observations.push_back(std::move(obs));
            }
            i = end;
        }

        std::stable_sort(out.observations.begin(), out.observations.end(),
                         [](const PacketObservation &a, const PacketObservation &b) {
                             return std::tie(a.timestamp, a.key) < std::tie(b.timestamp, b.key);
                         });
        std::sort(out.ambiguous.begin(), out.ambiguous.end(), [](const ReceiverRecord &a, const ReceiverRecord &b) {
            return std::tie(a.timestamp, a.receiver_id, a.hash) < std::tie(b.timestamp, b.receiver_id, b.hash);
        });
        return out;
    }

    /// Convenience overload for per-receiver streams.
    inline MatchResult match_packets(const std::vector<std::vector<ReceiverRecord>> &streams, double tolerance = 0.005)
    {
        std::vector<ReceiverRecord> all;
        for (const auto &s : streams)
            all.insert(all.end(), s.begin(), s.end());
        return match_packets(all, tolerance);
    }

    inline const std::vector<std::string> record_csv_header{"receiver_id", "hash_hex", "timestamp_s", "rss_dbm"};

    inline void write_records(const std::filesystem::path &path, const std::vector<ReceiverRecord> &records)
    {
        std::string body = "receiver_id,hash_hex,timestamp_s,rss_dbm\n";
        for (const auto &r : records)
            body += (csv::Line() << r.receiver_id << to_hex(r.hash) << r.timestamp << r.rss_dbm).str() + "\n";
        csv::write_atomic(path, body);
    }

    inline std::vector<ReceiverRecord> read_records(const std::filesystem::path &path)
    {
        const auto table = csv::read(path, record_csv_header);
        std::vector<ReceiverRecord> out;
        for (const auto &row : table.rows)
        {
            ReceiverRecord r;
            r.receiver_id = row.fields[0];
            try
            {
                r.hash = hash_from_hex(row.fields[1]);
            }
            catch (const Error &e)
            {
                throw ConfigError(table.source, row.line, e.what());
            }
            r.timestamp = table.number(row, 2);
            r.rss_dbm = table.number(row, 3);
            out.push_back(std::move(r));
        }
        return out;
    }
}

#endif
