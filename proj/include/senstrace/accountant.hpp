#pragma once

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "senstrace/json_io.hpp"
#include "senstrace/rng.hpp"
#include "senstrace/senv.hpp"

namespace senstrace::priv {

enum class Regime { PureEps, EpsDelta, Renyi };

std::string_view regime_name(Regime r);

struct EdCost {
  double eps = 0;
  double delta = 0;
  friend bool operator==(const EdCost &, const EdCost &) = default;
};

// One mechanism invocation's privacy cost and the sources it applies to.
struct Charge {
  Regime regime = Regime::PureEps;
  double eps = 0;
  double delta = 0; // EpsDelta only
  double alpha = 0; // Renyi only
  std::vector<SourceId> sources;

  static Charge pure(double eps, std::vector<SourceId> sources);
  static Charge ed(double eps, double delta, std::vector<SourceId> sources);
  static Charge renyi(double alpha, double eps, std::vector<SourceId> sources);
};

// Sequential (eps, delta) composition: the total eps across the calls, or
// infinity once the summed deltas exceed the global delta.
ExtReal comp_sequential_ed(std::span<const EdCost> calls, double delta_g);

// Advanced composition with a delta slack term:
//   eps_total  = eps * sqrt(2k ln(1/slack)) + k * eps * (e^eps - 1)
//   delta_total = k * delta + slack
// The calls must be homogeneous.
EdCost comp_advanced_ed(std::span<const EdCost> calls, double delta_slack);

// Conversion from a Renyi cost at order alpha to an (eps, delta) guarantee:
//   eps = eps_r + ln(1/delta) / (alpha - 1)
EdCost renyi_to_ed(double alpha, double eps_r, double delta);

class Odometer {
public:
  virtual ~Odometer() = default;
  virtual Regime regime() const = 0;
  // Accumulates the charge; throws RegimeMismatch / AlphaMismatch when the
  // charge cannot be absorbed by this accountant.
  virtual void record(const Charge &charge) = 0;
  virtual ojson to_json() const = 0;
};

// Running total of pure-epsilon costs per source.
class EpsOdometer : public Odometer {
public:
  Regime regime() const override { return Regime::PureEps; }
  void record(const Charge &charge) override;
  double total(const SourceId &source) const;
  ojson to_json() const override;

private:
  std::map<SourceId, double> totals_;
};

// Sequential (eps, delta) odometer with a fixed global delta.
class EdOdometer : public Odometer {
public:
  explicit EdOdometer(double delta_g) : delta_g_(delta_g) {}

  Regime regime() const override { return Regime::EpsDelta; }
  void record(const Charge &charge) override;

  // The composed guarantee for one source under COMP_{delta_g}.
  ExtReal total_epsilon(const SourceId &source) const;
  EdCost summed(const SourceId &source) const;
  double delta_g() const { return delta_g_; }

  // Records a pre-collected call list against one source and returns the
  // composed epsilon.
  ExtReal charge_sequential(const SourceId &source,
                            std::span<const EdCost> calls);

  ojson to_json() const override;

private:
  std::map<SourceId, std::vector<EdCost>> calls_;
  double delta_g_;
};

// Renyi odometer at a fixed order; costs add linearly.
class RenyiOdometer : public Odometer {
public:
  explicit RenyiOdometer(double alpha);

  Regime regime() const override { return Regime::Renyi; }
  double alpha() const { return alpha_; }
  void record(const Charge &charge) override;
  double total(const SourceId &source) const;
  const std::map<SourceId, double> &totals() const { return totals_; }
  EdCost to_ed(const SourceId &source, double delta) const;
  ojson to_json() const override;

private:
  double alpha_;
  std::map<SourceId, double> totals_;
};

// Advanced-composition odometer: keeps the per-call list and composes on
// query.
class AdvEdOdometer : public Odometer {
public:
  explicit AdvEdOdometer(double delta_slack);

  Regime regime() const override { return Regime::EpsDelta; }
  void record(const Charge &charge) override;
  EdCost total(const SourceId &source) const;
  ojson to_json() const override;

private:
  double delta_slack_;
  std::map<SourceId, std::vector<EdCost>> calls_;
};

enum class FilterDecision { Cont, Halt };

class Filter {
public:
  virtual ~Filter() = default;
  virtual Regime regime() const = 0;
  // Decides whether the charge fits the remaining budget. Halting latches:
  // every later check also halts. Totals change only on commit.
  virtual FilterDecision check(const Charge &charge) = 0;
  virtual void commit(const Charge &charge) = 0;
  virtual bool halted() const = 0;
  virtual ojson to_json() const = 0;
};

class EdFilter : public Filter {
public:
  EdFilter(double eps_g, double delta_g) : eps_g_(eps_g), delta_g_(delta_g) {}

  Regime regime() const override { return Regime::EpsDelta; }
  FilterDecision check(const Charge &charge) override;
  void commit(const Charge &charge) override;
  bool halted() const override { return halted_; }
  EdCost spent(const SourceId &source) const;
  ojson to_json() const override;

private:
  double eps_g_, delta_g_;
  bool halted_ = false;
  std::map<SourceId, EdCost> totals_;
};

class RenyiFilter : public Filter {
public:
  RenyiFilter(double alpha, double eps_g);

  Regime regime() const override { return Regime::Renyi; }
  double alpha() const { return alpha_; }
  FilterDecision check(const Charge &charge) override;
  void commit(const Charge &charge) override;
  bool halted() const override { return halted_; }
  double spent(const SourceId &source) const;
  ojson to_json() const override;

private:
  double alpha_, eps_g_;
  bool halted_ = false;
  std::map<SourceId, double> totals_;
};

// The active accountants for one run, innermost last, plus the run's noise
// stream. Mechanisms consult every active filter (innermost first) and only
// then record the charge everywhere.
class AccountantScope {
public:
  explicit AccountantScope(std::uint64_t seed) : rng_(seed) {}

  Rng &rng() { return rng_; }

  void charge(const Charge &charge); // throws FilterHalt

  class OdometerGuard {
  public:
    OdometerGuard(AccountantScope &scope, Odometer &odometer) : scope_(scope) {
      scope_.odometers_.push_back(&odometer);
    }
    ~OdometerGuard() { scope_.odometers_.pop_back(); }
    OdometerGuard(const OdometerGuard &) = delete;
    OdometerGuard &operator=(const OdometerGuard &) = delete;

  private:
    AccountantScope &scope_;
  };

  class FilterGuard {
  public:
    FilterGuard(AccountantScope &scope, Filter &filter) : scope_(scope) {
      scope_.filters_.push_back(&filter);
    }
    ~FilterGuard() { scope_.filters_.pop_back(); }
    FilterGuard(const FilterGuard &) = delete;
    FilterGuard &operator=(const FilterGuard &) = delete;

  private:
    AccountantScope &scope_;
  };

  // Detaches/restores the accountant stacks; used by privacy-variant blocks
  // which must isolate inner mechanism charges from the enclosing regime.
  struct Accountants {
    std::vector<Odometer *> odometers;
    std::vector<Filter *> filters;
  };
  Accountants swap_accountants(Accountants next);

private:
  std::vector<Odometer *> odometers_;
  std::vector<Filter *> filters_;
  Rng rng_;
};

} // namespace senstrace::priv
