#include "glevy/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glevy {

double Scenario::total_rate() const {
  double total = 0.0;
  for (const auto& atom : atoms) total += atom.rate;
  return total;
}

double Scenario::first_moment() const {
  double total = 0.0;
  for (const auto& atom : atoms) total += atom.rate * atom.size.norm();
  return total;
}

double Scenario::mass() const { return first_moment() + drift.norm() + covariance().trace(); }

double UncertaintySet::max_total_rate() const {
  double best = 0.0;
  for (const auto& s : scenarios_) best = std::max(best, s.total_rate());
  return best;
}

double UncertaintySet::max_jump_norm() const {
  double best = 0.0;
  for (const auto& s : scenarios_)
    for (const auto& atom : s.atoms) best = std::max(best, atom.size.norm());
  return best;
}

Scenario make_scenario(JumpMeasure atoms, Vector drift, std::optional<Matrix> diffusion) {
  const auto d = drift.size();
  Scenario s{std::move(atoms), std::move(drift), diffusion ? std::move(*diffusion) : Matrix::Zero(d, d)};
  return s;
}

UncertaintySet validate_uncertainty_set(std::vector<Scenario> raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptySet, "uncertainty set has no scenarios");

  const auto d = raw.front().drift.size();
  if (d < 1) throw Error(ErrorCode::DimensionMismatch, "scenario 0 has an empty drift vector");

  double mass_bound = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& s = raw[i];
    const std::string where = "scenario " + std::to_string(i);
    if (s.drift.size() != d) throw Error(ErrorCode::DimensionMismatch, where + ": drift dimension differs");
    if (s.diffusion.rows() != d || s.diffusion.cols() != d)
      throw Error(ErrorCode::DimensionMismatch, where + ": diffusion must be d x d");
    if (!s.drift.allFinite()) throw Error(ErrorCode::NonFinite, where + ": drift");
    if (!s.diffusion.allFinite()) throw Error(ErrorCode::NonFinite, where + ": diffusion");

    for (std::size_t k = 0; k < s.atoms.size(); ++k) {
      const auto& atom = s.atoms[k];
      const std::string at = where + " atom " + std::to_string(k);
      if (atom.size.size() != d) throw Error(ErrorCode::DimensionMismatch, at + ": jump dimension differs");
      if (!atom.size.allFinite() || !std::isfinite(atom.rate)) throw Error(ErrorCode::NonFinite, at);
      if (atom.rate < 0.0) throw Error(ErrorCode::NegativeRate, at + ": rate " + std::to_string(atom.rate));
      if (atom.size.isZero(0.0)) throw Error(ErrorCode::ZeroJump, at + ": jump size is zero");
    }
    mass_bound = std::max(mass_bound, s.mass());
  }
  if (!std::isfinite(mass_bound)) throw Error(ErrorCode::NonFinite, "mass bound overflows");
  return UncertaintySet(std::move(raw), mass_bound);
}

void SchemeConfig::validate() const {
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "cfl_safety must lie in (0, 1]");
  if (!(final_time >= 0.0) || !std::isfinite(final_time))
    throw Error(ErrorCode::InvalidArgument, "final_time must be finite and nonnegative");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidTolerance, "tolerance must be positive");
  if (max_dt && !(*max_dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_dt must be positive");
  if (threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
}

}  // namespace glevy
