#pragma once

#include <functional>
#include <initializer_list>
#include <vector>

#include "jetflow/change.hpp"
#include "jetflow/jet_point.hpp"
#include "jetflow/metrics.hpp"

namespace jetflow {

/// One index position of a distinguished tensor. Velocity slots stand for
/// the paired index that transforms as a single unit.
enum class Slot { TimeUp, TimeDown, SpaceUp, SpaceDown, VelUp, VelDown };

inline bool slotIsTime(Slot s) { return s == Slot::TimeUp || s == Slot::TimeDown; }

/// Dense component array of a d-tensor at one base point. Time axes are
/// materialized with extent 1 so the axis count matches the index count.
class DTensorValue {
 public:
  DTensorValue() = default;
  DTensorValue(std::vector<Slot> signature, JetPoint base);

  const std::vector<Slot>& signature() const { return sig_; }
  const JetPoint& base() const { return base_; }
  int rank() const { return static_cast<int>(sig_.size()); }
  int extent(int axis) const { return dims_[axis]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;

  /// Components at prolong(c, base) under the untilde -> tilde direction of
  /// the d-tensor transformation law, slot factor by slot factor.
  DTensorValue transformed(const JetChange& c) const;

  double maxAbsDiff(const DTensorValue& other) const;

 private:
  std::size_t offset(const std::vector<int>& idx) const;
  std::vector<Slot> sig_;
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<double> data_;
  JetPoint base_;
};

/// A d-tensor field: signature plus a pointwise evaluator.
struct DTensorField {
  std::vector<Slot> signature;
  std::function<DTensorValue(const JetPoint&)> eval;
};

/// Canonical Liouville d-tensor C^(i)_(1) = y^i, signature (VelUp).
DTensorValue liouville(const JetPoint& p);

/// h-normalization d-tensor J^(i)_(1)1j = h11 delta^i_j,
/// signature (VelUp, TimeDown, SpaceDown).
DTensorValue hNormalization(const TemporalMetric& h, const JetPoint& p);

/// h-canonical Liouville d-tensor L^(i)_(1)11 = h11 y^i,
/// signature (VelUp, TimeDown, TimeDown).
DTensorValue hLiouville(const TemporalMetric& h, const JetPoint& p);

}  // namespace jetflow
