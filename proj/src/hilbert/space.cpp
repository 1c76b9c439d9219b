#include <algorithm>
#include <unordered_set>

#include "bhsi/hilbert.hpp"

namespace bhsi {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System:
      return "system";
    case Role::LocalEnvironment:
      return "local-environment";
    case Role::Observer:
      return "observer";
    case Role::Ancilla:
      return "ancilla";
  }
  return "unknown";
}

SpaceDescription::SpaceDescription(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.dim == 0) {
      throw ArgumentError("subsystem '" + s.id + "' has dimension 0");
    }
    if (!seen.insert(s.id).second) {
      throw CompositionError("duplicate subsystem id '" + s.id + "'");
    }
  }
  strides_.assign(subsystems_.size(), 1);
  dimension_ = 1;
  for (std::size_t i = subsystems_.size(); i-- > 0;) {
    strides_[i] = dimension_;
    dimension_ *= subsystems_[i].dim;
  }
}

bool SpaceDescription::contains(std::string_view id) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const Subsystem& s) { return s.id == id; });
}

std::size_t SpaceDescription::position(std::string_view id) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].id == id) {
      return i;
    }
  }
  throw CompositionError("subsystem '" + std::string(id) + "' not in space");
}

const Subsystem& SpaceDescription::subsystem(std::string_view id) const { return subsystems_[position(id)]; }

std::size_t SpaceDescription::stride(std::string_view id) const { return strides_[position(id)]; }

std::vector<std::size_t> SpaceDescription::decompose(std::size_t index) const {
  std::vector<std::size_t> digits(subsystems_.size());
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    digits[i] = (index / strides_[i]) % subsystems_[i].dim;
  }
  return digits;
}

std::size_t SpaceDescription::compose(std::span<const std::size_t> digits) const {
  if (digits.size() != subsystems_.size()) {
    throw CompositionError("digit count does not match subsystem count");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= subsystems_[i].dim) {
      throw ArgumentError("basis digit out of range for '" + subsystems_[i].id + "'");
    }
    index += digits[i] * strides_[i];
  }
  return index;
}

SpaceDescription SpaceDescription::select(std::span<const std::string> ids) const {
  for (const auto& id : ids) {
    position(id);
  }
  std::vector<Subsystem> kept;
  for (const auto& s : subsystems_) {
    if (std::find(ids.begin(), ids.end(), s.id) != ids.end()) {
      kept.push_back(s);
    }
  }
  return SpaceDescription(std::move(kept));
}

SpaceDescription SpaceDescription::complement(std::span<const std::string> ids) const {
  for (const auto& id : ids) {
    position(id);
  }
  std::vector<Subsystem> rest;
  for (const auto& s : subsystems_) {
    if (std::find(ids.begin(), ids.end(), s.id) == ids.end()) {
      rest.push_back(s);
    }
  }
  return SpaceDescription(std::move(rest));
}

std::vector<std::string> SpaceDescription::ids() const {
  std::vector<std::string> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) {
    out.push_back(s.id);
  }
  return out;
}

SpaceDescription concat(const SpaceDescription& a, const SpaceDescription& b) {
  std::vector<Subsystem> all = a.subsystems();
  all.insert(all.end(), b.subsystems().begin(), b.subsystems().end());
  return SpaceDescription(std::move(all));
}

SpaceDescription single_space(std::string id, std::size_t dim, Role role) {
  return SpaceDescription({Subsystem{std::move(id), dim, role}});
}

std::vector<BasisLabel> basis_labels(const Subsystem& subsystem) {
  std::vector<BasisLabel> labels;
  labels.reserve(subsystem.dim);
  for (std::size_t k = 0; k < subsystem.dim; ++k) {
    labels.push_back({subsystem.id, k, subsystem.id + "_" + std::to_string(k)});
  }
  return labels;
}

}  // namespace bhsi
