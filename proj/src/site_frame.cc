// Copyright 2026 The steermpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "steer/site_frame.h"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace steer {
namespace {

struct Registry {
  std::mutex mutex;
  // deque keeps references stable while names are appended
  std::deque<std::string> names;
  std::unordered_map<std::string, SiteId> ids;
};

Registry& GetRegistry() {
  static Registry registry;
  return registry;
}

}  // namespace

SiteId InternSite(std::string_view name) {
  Registry& registry = GetRegistry();
  std::lock_guard<std::mutex> lock(registry.mutex);
  auto it = registry.ids.find(std::string(name));
  if (it != registry.ids.end()) return it->second;
  const SiteId id = static_cast<SiteId>(registry.names.size());
  registry.names.emplace_back(name);
  registry.ids.emplace(std::string(name), id);
  return id;
}

const std::string& SiteName(SiteId id) {
  Registry& registry = GetRegistry();
  std::lock_guard<std::mutex> lock(registry.mutex);
  static const std::string kUnknown = "<unknown>";
  if (id < 0 || id >= static_cast<SiteId>(registry.names.size())) {
    return kUnknown;
  }
  return registry.names[id];
}

SiteId FindSite(std::string_view name) {
  Registry& registry = GetRegistry();
  std::lock_guard<std::mutex> lock(registry.mutex);
  auto it = registry.ids.find(std::string(name));
  return it == registry.ids.end() ? -1 : it->second;
}

SiteFrame::Slot& SiteFrame::Mutable(SiteId id) {
  if (id < 0) throw SiteResolutionError("<invalid id>");
  if (id >= static_cast<SiteId>(slots_.size())) slots_.resize(id + 1);
  return slots_[id];
}

const SiteFrame::Slot& SiteFrame::Require(SiteId id, SlotKind kind) const {
  if (id < 0 || id >= static_cast<SiteId>(slots_.size()) ||
      slots_[id].kind == SlotKind::kNone) {
    throw SiteResolutionError(SiteName(id));
  }
  if (slots_[id].kind != kind) {
    throw SiteResolutionError(SiteName(id), "wrong slot kind for site");
  }
  return slots_[id];
}

void SiteFrame::SetPoint(SiteId id, const Vec3& p) {
  Slot& slot = Mutable(id);
  slot.kind = SlotKind::kPoint;
  slot.value = p;
}

void SiteFrame::SetAxis(SiteId id, const Vec3& axis) {
  Slot& slot = Mutable(id);
  slot.kind = SlotKind::kAxis;
  const double n = axis.norm();
  slot.value = n > 0.0 ? Vec3(axis / n) : axis;
}

void SiteFrame::SetVector(SiteId id, const Value& v) {
  Slot& slot = Mutable(id);
  slot.kind = SlotKind::kVector;
  slot.value = v;
}

void SiteFrame::SetScalar(SiteId id, double s) {
  Slot& slot = Mutable(id);
  slot.kind = SlotKind::kScalar;
  slot.value.resize(1);
  slot.value[0] = s;
}

void SiteFrame::SetQuat(SiteId id, const Vec4& q) {
  Slot& slot = Mutable(id);
  slot.kind = SlotKind::kQuat;
  slot.value = q;
}

bool SiteFrame::Has(SiteId id) const {
  return id >= 0 && id < static_cast<SiteId>(slots_.size()) &&
         slots_[id].kind != SlotKind::kNone;
}

SlotKind SiteFrame::Kind(SiteId id) const {
  return Has(id) ? slots_[id].kind : SlotKind::kNone;
}

Vec3 SiteFrame::Point(SiteId id) const {
  return Require(id, SlotKind::kPoint).value.head<3>();
}

Vec3 SiteFrame::Axis(SiteId id) const {
  return Require(id, SlotKind::kAxis).value.head<3>();
}

const SiteFrame::Value& SiteFrame::Vector(SiteId id) const {
  return Require(id, SlotKind::kVector).value;
}

double SiteFrame::Scalar(SiteId id) const {
  return Require(id, SlotKind::kScalar).value[0];
}

Vec4 SiteFrame::Quat(SiteId id) const {
  return Require(id, SlotKind::kQuat).value.head<4>();
}

std::vector<SiteId> SiteFrame::Present() const {
  std::vector<SiteId> out;
  for (SiteId id = 0; id < static_cast<SiteId>(slots_.size()); ++id) {
    if (slots_[id].kind != SlotKind::kNone) out.push_back(id);
  }
  return out;
}

SiteFrame WorldAxesFrame() {
  SiteFrame frame;
  frame.SetAxis(sites::kWorldX, Vec3::UnitX());
  frame.SetAxis(sites::kWorldY, Vec3::UnitY());
  frame.SetAxis(sites::kWorldZ, Vec3::UnitZ());
  return frame;
}

}  // namespace steer
