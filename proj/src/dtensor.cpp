#include "jetflow/dtensor.hpp"

#include <cmath>

#include "jetflow/errors.hpp"

namespace jetflow {

DTensorValue::DTensorValue(std::vector<Slot> signature, JetPoint base)
    : sig_(std::move(signature)), base_(std::move(base)) {
  const int n = base_.dim();
  dims_.reserve(sig_.size());
  for (Slot s : sig_) dims_.push_back(slotIsTime(s) ? 1 : n);
  strides_.assign(dims_.size(), 1);
  std::size_t total = 1;
  for (int a = static_cast<int>(dims_.size()) - 1; a >= 0; --a) {
    strides_[a] = total;
    total *= dims_[a];
  }
  data_.assign(total, 0.0);
}

std::size_t DTensorValue::offset(const std::vector<int>& idx) const {
  if (idx.size() != sig_.size()) throw Error("DTensorValue: index rank mismatch");
  std::size_t o = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= dims_[a]) throw Error("DTensorValue: index out of range");
    o += strides_[a] * static_cast<std::size_t>(idx[a]);
  }
  return o;
}

double& DTensorValue::at(const std::vector<int>& idx) { return data_[offset(idx)]; }
double DTensorValue::at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

DTensorValue DTensorValue::transformed(const JetChange& c) const {
  ChangeFrame f = c.frame(base_);
  DTensorValue out(sig_, f.image);
  out.data_ = data_;

  // Per-slot factor in the untilde -> tilde direction. F(new, old).
  for (std::size_t axis = 0; axis < sig_.size(); ++axis) {
    MatrixXd F;
    switch (sig_[axis]) {
      case Slot::TimeUp: F = MatrixXd::Constant(1, 1, f.dtf); break;
      case Slot::TimeDown: F = MatrixXd::Constant(1, 1, f.dti); break;
      case Slot::SpaceUp: F = f.J; break;
      case Slot::SpaceDown: F = f.Jinv.transpose(); break;  // F(new,old) = dx^old/dxt^new
      case Slot::VelUp: F = f.J * f.dti; break;
      case Slot::VelDown: F = f.Jinv.transpose() * f.dtf; break;
    }
    // contract this axis with F
    std::vector<double> next(out.data_.size(), 0.0);
    const std::size_t stride = out.strides_[axis];
    const int extent = out.dims_[axis];
    for (std::size_t start = 0; start < out.data_.size(); ++start) {
      // visit each fiber once, at its index-0 element along `axis`
      if ((start / stride) % static_cast<std::size_t>(extent) != 0) continue;
      for (int newi = 0; newi < extent; ++newi) {
        double s = 0.0;
        for (int oldi = 0; oldi < extent; ++oldi)
          s += F(newi, oldi) * out.data_[start + stride * oldi];
        next[start + stride * newi] = s;
      }
    }
    out.data_.swap(next);
  }
  return out;
}

double DTensorValue::maxAbsDiff(const DTensorValue& other) const {
  if (data_.size() != other.data_.size()) throw Error("DTensorValue: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

DTensorValue liouville(const JetPoint& p) {
  DTensorValue v({Slot::VelUp}, p);
  for (int i = 0; i < p.dim(); ++i) v.at({i}) = p.y[i];
  return v;
}

DTensorValue hNormalization(const TemporalMetric& h, const JetPoint& p) {
  DTensorValue v({Slot::VelUp, Slot::TimeDown, Slot::SpaceDown}, p);
  double h11 = h.h11(p.t);
  for (int i = 0; i < p.dim(); ++i) v.at({i, 0, i}) = h11;
  return v;
}

DTensorValue hLiouville(const TemporalMetric& h, const JetPoint& p) {
  DTensorValue v({Slot::VelUp, Slot::TimeDown, Slot::TimeDown}, p);
  double h11 = h.h11(p.t);
  for (int i = 0; i < p.dim(); ++i) v.at({i, 0, 0}) = h11 * p.y[i];
  return v;
}

}  // namespace jetflow
