// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "qrs/protocol.hpp"

namespace qrs {

// One JSON object per line. The server view is the information-theoretic
// projection of the record onto what the server's side of the wire holds:
// s is dropped, and so is sensing_bit (it equals s xor o, so keeping it
// would hand s right back).
inline nlohmann::ordered_json round_to_json(const RoundRecord& rec, bool server_view_only,
                                            std::uint64_t trial) {
  nlohmann::ordered_json j;
  j["trial"] = trial;
  j["round"] = rec.round_index;
  j["n_fail"] = rec.n_fail;
  j["accepted"] = rec.accepted;
  j["aborted"] = rec.aborted;
  j["fidelity_floor"] = rec.fidelity_floor;
  if (!server_view_only) j["s"] = rec.s;
  if (rec.o)
    j["o"] = *rec.o;
  else
    j["o"] = nullptr;
  if (!server_view_only) {
    if (rec.sensing_bit)
      j["sensing_bit"] = *rec.sensing_bit;
    else
      j["sensing_bit"] = nullptr;
  }
  return j;
}

inline void write_transcript(std::ostream& out, const RunRecord& run, bool server_view_only,
                             std::uint64_t trial) {
  for (const auto& rec : run.rounds)
    out << round_to_json(rec, server_view_only, trial).dump() << '\n';
}

}  // namespace qrs
