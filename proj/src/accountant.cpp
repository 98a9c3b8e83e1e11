#include "senstrace/accountant.hpp"

#include <cmath>
#include <stdexcept>

#include "senstrace/errors.hpp"
#include "senstrace/real_text.hpp"

namespace senstrace::priv {

std::string_view regime_name(Regime r) {
  switch (r) {
  case Regime::PureEps: return "eps";
  case Regime::EpsDelta: return "eps_delta";
  case Regime::Renyi: return "renyi";
  }
  return "?";
}

Charge Charge::pure(double eps, std::vector<SourceId> sources) {
  return Charge{Regime::PureEps, eps, 0, 0, std::move(sources)};
}

Charge Charge::ed(double eps, double delta, std::vector<SourceId> sources) {
  return Charge{Regime::EpsDelta, eps, delta, 0, std::move(sources)};
}

Charge Charge::renyi(double alpha, double eps, std::vector<SourceId> sources) {
  return Charge{Regime::Renyi, eps, 0, alpha, std::move(sources)};
}

ExtReal comp_sequential_ed(std::span<const EdCost> calls, double delta_g) {
  double eps_sum = 0, delta_sum = 0;
  for (const EdCost &c : calls) {
    eps_sum += c.eps;
    delta_sum += c.delta;
  }
  if (delta_sum > delta_g) {
    return ExtReal::infinity();
  }
  return ExtReal(eps_sum);
}

EdCost comp_advanced_ed(std::span<const EdCost> calls, double delta_slack) {
  if (!(delta_slack > 0 && delta_slack < 1)) {
    throw Error(ErrorKind::DeltaOutOfRange,
                "advanced composition slack must be in (0,1), got " +
                    format_real(delta_slack));
  }
  const std::size_t k = calls.size();
  if (k == 0) {
    return EdCost{0, delta_slack};
  }
  const EdCost base = calls.front();
  for (const EdCost &c : calls) {
    if (!(c == base)) {
      throw Error(ErrorKind::HeterogeneousCosts,
                  "advanced composition requires homogeneous per-call costs");
    }
  }
  const double kd = static_cast<double>(k);
  const double eps_total =
      base.eps * std::sqrt(2.0 * kd * std::log(1.0 / delta_slack)) +
      kd * base.eps * (std::exp(base.eps) - 1.0);
  return EdCost{eps_total, kd * base.delta + delta_slack};
}

EdCost renyi_to_ed(double alpha, double eps_r, double delta) {
  if (!(alpha > 1)) {
    throw std::invalid_argument("renyi order must be > 1");
  }
  if (!(delta > 0 && delta < 1)) {
    throw Error(ErrorKind::DeltaOutOfRange,
                "conversion delta must be in (0,1), got " +
                    format_real(delta));
  }
  return EdCost{eps_r + std::log(1.0 / delta) / (alpha - 1.0), delta};
}

namespace {

[[noreturn]] void regime_mismatch(Regime accountant, const Charge &charge) {
  throw Error(ErrorKind::RegimeMismatch,
              std::string("a ") + std::string(regime_name(charge.regime)) +
                  " cost cannot be absorbed by a " +
                  std::string(regime_name(accountant)) + " accountant");
}

void require_renyi_alpha(double have, const Charge &charge) {
  if (charge.regime != Regime::Renyi) {
    regime_mismatch(Regime::Renyi, charge);
  }
  if (charge.alpha != have) {
    throw Error(ErrorKind::AlphaMismatch,
                "charge at order " + format_real(charge.alpha) +
                    " against an accountant at order " + format_real(have));
  }
}

// PureEps charges flow into (eps, delta) accountants as (eps, 0).
EdCost ed_view(const Charge &charge, Regime accountant) {
  if (charge.regime == Regime::PureEps) {
    return EdCost{charge.eps, 0};
  }
  if (charge.regime == Regime::EpsDelta) {
    return EdCost{charge.eps, charge.delta};
  }
  regime_mismatch(accountant, charge);
}

} // namespace

void EpsOdometer::record(const Charge &charge) {
  if (charge.regime != Regime::PureEps) {
    regime_mismatch(Regime::PureEps, charge);
  }
  for (const SourceId &source : charge.sources) {
    totals_[source] += charge.eps;
  }
}

double EpsOdometer::total(const SourceId &source) const {
  auto it = totals_.find(source);
  return it == totals_.end() ? 0.0 : it->second;
}

ojson EpsOdometer::to_json() const {
  ojson costs = ojson::object();
  for (const auto &[source, eps] : totals_) {
    costs[source.str()] = eps;
  }
  return ojson{{"regime", "eps"}, {"costs", costs}};
}

void EdOdometer::record(const Charge &charge) {
  const EdCost cost = ed_view(charge, Regime::EpsDelta);
  for (const SourceId &source : charge.sources) {
    calls_[source].push_back(cost);
  }
}

EdCost EdOdometer::summed(const SourceId &source) const {
  EdCost out;
  auto it = calls_.find(source);
  if (it == calls_.end()) {
    return out;
  }
  for (const EdCost &c : it->second) {
    out.eps += c.eps;
    out.delta += c.delta;
  }
  return out;
}

ExtReal EdOdometer::total_epsilon(const SourceId &source) const {
  auto it = calls_.find(source);
  if (it == calls_.end()) {
    return ExtReal(0.0);
  }
  return comp_sequential_ed(it->second, delta_g_);
}

ExtReal EdOdometer::charge_sequential(const SourceId &source,
                                      std::span<const EdCost> calls) {
  for (const EdCost &c : calls) {
    calls_[source].push_back(c);
  }
  return total_epsilon(source);
}

ojson EdOdometer::to_json() const {
  ojson costs = ojson::object();
  for (const auto &[source, list] : calls_) {
    const EdCost sum = summed(source);
    costs[source.str()] = ojson::array({sum.eps, sum.delta});
  }
  return ojson{
      {"regime", "eps_delta"}, {"delta_g", delta_g_}, {"costs", costs}};
}

RenyiOdometer::RenyiOdometer(double alpha) : alpha_(alpha) {
  if (!(alpha > 1)) {
    throw std::invalid_argument("renyi order must be > 1");
  }
}

void RenyiOdometer::record(const Charge &charge) {
  require_renyi_alpha(alpha_, charge);
  for (const SourceId &source : charge.sources) {
    totals_[source] += charge.eps;
  }
}

double RenyiOdometer::total(const SourceId &source) const {
  auto it = totals_.find(source);
  return it == totals_.end() ? 0.0 : it->second;
}

EdCost RenyiOdometer::to_ed(const SourceId &source, double delta) const {
  return renyi_to_ed(alpha_, total(source), delta);
}

ojson RenyiOdometer::to_json() const {
  ojson costs = ojson::object();
  for (const auto &[source, eps] : totals_) {
    costs[source.str()] = eps;
  }
  return ojson{{"regime", "renyi"},
               {"alpha", finite_number_json(alpha_)},
               {"costs", costs}};
}

AdvEdOdometer::AdvEdOdometer(double delta_slack) : delta_slack_(delta_slack) {
  if (!(delta_slack > 0 && delta_slack < 1)) {
    throw Error(ErrorKind::DeltaOutOfRange,
                "advanced composition slack must be in (0,1)");
  }
}

void AdvEdOdometer::record(const Charge &charge) {
  const EdCost cost = ed_view(charge, Regime::EpsDelta);
  for (const SourceId &source : charge.sources) {
    calls_[source].push_back(cost);
  }
}

EdCost AdvEdOdometer::total(const SourceId &source) const {
  auto it = calls_.find(source);
  if (it == calls_.end()) {
    return EdCost{0, delta_slack_};
  }
  return comp_advanced_ed(it->second, delta_slack_);
}

ojson AdvEdOdometer::to_json() const {
  ojson costs = ojson::object();
  for (const auto &[source, list] : calls_) {
    const EdCost composed = total(source);
    costs[source.str()] = ojson::array({composed.eps, composed.delta});
  }
  return ojson{{"regime", "eps_delta"},
               {"composition", "advanced"},
               {"delta_slack", delta_slack_},
               {"costs", costs}};
}

FilterDecision EdFilter::check(const Charge &charge) {
  if (halted_) {
    return FilterDecision::Halt;
  }
  const EdCost cost = ed_view(charge, Regime::EpsDelta);
  for (const SourceId &source : charge.sources) {
    auto it = totals_.find(source);
    const EdCost spent = it == totals_.end() ? EdCost{} : it->second;
    if (spent.eps + cost.eps > eps_g_ || spent.delta + cost.delta > delta_g_) {
      halted_ = true;
      return FilterDecision::Halt;
    }
  }
  return FilterDecision::Cont;
}

void EdFilter::commit(const Charge &charge) {
  const EdCost cost = ed_view(charge, Regime::EpsDelta);
  for (const SourceId &source : charge.sources) {
    EdCost &spent = totals_[source];
    spent.eps += cost.eps;
    spent.delta += cost.delta;
  }
}

EdCost EdFilter::spent(const SourceId &source) const {
  auto it = totals_.find(source);
  return it == totals_.end() ? EdCost{} : it->second;
}

ojson EdFilter::to_json() const {
  ojson costs = ojson::object();
  for (const auto &[source, spent] : totals_) {
    costs[source.str()] = ojson::array({spent.eps, spent.delta});
  }
  return ojson{{"regime", "eps_delta"},
               {"budget", ojson::array({eps_g_, delta_g_})},
               {"halted", halted_},
               {"costs", costs}};
}

RenyiFilter::RenyiFilter(double alpha, double eps_g)
    : alpha_(alpha), eps_g_(eps_g) {
  if (!(alpha > 1)) {
    throw std::invalid_argument("renyi order must be > 1");
  }
}

FilterDecision RenyiFilter::check(const Charge &charge) {
  require_renyi_alpha(alpha_, charge);
  if (halted_) {
    return FilterDecision::Halt;
  }
  for (const SourceId &source : charge.sources) {
    auto it = totals_.find(source);
    const double spent = it == totals_.end() ? 0.0 : it->second;
    if (spent + charge.eps > eps_g_) {
      halted_ = true;
      return FilterDecision::Halt;
    }
  }
  return FilterDecision::Cont;
}

void RenyiFilter::commit(const Charge &charge) {
  for (const SourceId &source : charge.sources) {
    totals_[source] += charge.eps;
  }
}

double RenyiFilter::spent(const SourceId &source) const {
  auto it = totals_.find(source);
  return it == totals_.end() ? 0.0 : it->second;
}

ojson RenyiFilter::to_json() const {
  ojson costs = ojson::object();
  for (const auto &[source, spent] : totals_) {
    costs[source.str()] = spent;
  }
  return ojson{{"regime", "renyi"},
               {"alpha", finite_number_json(alpha_)},
               {"budget", eps_g_},
               {"halted", halted_},
               {"costs", costs}};
}

void AccountantScope::charge(const Charge &charge) {
  // Consult every filter first, innermost outward; nothing is recorded if
  // any of them refuses.
  for (auto it = filters_.rbegin(); it != filters_.rend(); ++it) {
    if ((*it)->check(charge) == FilterDecision::Halt) {
      throw Error(ErrorKind::FilterHalt,
                  "privacy filter budget exhausted by a charge of eps=" +
                      format_real(charge.eps));
    }
  }
  for (auto it = filters_.rbegin(); it != filters_.rend(); ++it) {
    (*it)->commit(charge);
  }
  for (auto it = odometers_.rbegin(); it != odometers_.rend(); ++it) {
    (*it)->record(charge);
  }
}

AccountantScope::Accountants
AccountantScope::swap_accountants(Accountants next) {
  Accountants prev{std::move(odometers_), std::move(filters_)};
  odometers_ = std::move(next.odometers);
  filters_ = std::move(next.filters);
  return prev;
}

} // namespace senstrace::priv
