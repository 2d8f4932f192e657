/* Copyright 2026 The ncdp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "ncdp/pipeline.hpp"

namespace ncdp {

void DataplaneCounters::count(Disposition d) {
  ++ingress_passes;
  switch (d) {
    case Disposition::Forwarded: ++forwarded; break;
    case Disposition::Stored: ++stored; break;
    case Disposition::Consumed: ++consumed; break;
    case Disposition::DroppedUnmatched: ++dropped_unmatched; break;
    case Disposition::LoopGuarded: ++loop_guarded; break;
  }
}

void Traversal::emit(Packet p, PortId port) {
  const Nanos t = now();
  p.header.telemetry.push_back(TelemetryRecord{switch_id_, static_cast<std::uint64_t>(start_),
                                               static_cast<std::uint64_t>(t)});
  p.meta.generated_port.reset();
  p.meta.recirc_depth = 0;
  emissions_.push_back(Emission{std::move(p), port, t});
}

Packet Traversal::clone(const Packet& p) {
  ++cost_.clones;
  cost_.bytes_touched += p.payload.size();
  return p;
}

bool Traversal::clone_and_recirculate(const Packet& p, const std::function<void(Packet&)>& mutator) {
  if (p.meta.recirc_depth >= max_recirc_) {
    ++loop_guard_hits_;
    return false;
  }
  Packet copy = clone(p);
  if (mutator) mutator(copy);
  copy.meta.recirc_depth = p.meta.recirc_depth + 1;
  copy.meta.ingress_port = kRecirculatePort;
  ++cost_.recirculations;
  recirculated_.push_back(std::move(copy));
  return true;
}

Packet Traversal::pop_recirculation() {
  Packet p = std::move(recirculated_.front());
  recirculated_.pop_front();
  return p;
}

}  // namespace ncdp
