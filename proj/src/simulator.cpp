#include "ehcr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ehcr/error.hpp"
#include "ehcr/performance.hpp"
#include "ehcr/sensing.hpp"

namespace ehcr {

namespace {

// Independent generator per slot quantity, so that drawing more or fewer
// values from one stream never shifts another.
enum Stream : std::uint64_t {
  kPuActivity = 1,
  kGainP,
  kGainPst,
  kGainPs,
  kGainS,
  kGainSp,
  kAction,
  kSensing,
  kNature,
  kRf,
};

std::mt19937_64 substream(std::uint64_t seed, Stream id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), 0x5eedu};
  return std::mt19937_64(seq);
}

// Accumulates per-batch sums of one or two per-slot series.
class BatchSeries {
 public:
  BatchSeries(long slots, int batches)
      : batch_size_(std::max(1L, slots / std::max(1, batches))),
        num_batches_(static_cast<size_t>((slots + batch_size_ - 1) / batch_size_)),
        y_(num_batches_, 0.0),
        x_(num_batches_, 0.0) {}

  void add(long slot, double y, double x = 1.0) {
    const size_t b = static_cast<size_t>(slot / batch_size_);
    y_[b] += y;
    x_[b] += x;
  }

  // Ratio estimator Σy/Σx with batch-means standard error of the
  // linearized residual y - r x. Only full batches enter the variance.
  Estimate ratio(long slots) const {
    const size_t full = static_cast<size_t>(slots / batch_size_);
    double sy = 0.0, sx = 0.0;
    for (size_t b = 0; b < num_batches_; ++b) {
      sy += y_[b];
      sx += x_[b];
    }
    Estimate e;
    e.value = sx > 0.0 ? sy / sx : 0.0;
    if (full < 2 || sx <= 0.0) {
      e.std_error = std::numeric_limits<double>::infinity();
      return e;
    }
    double fy = 0.0, fx = 0.0;
    for (size_t b = 0; b < full; ++b) {
      fy += y_[b];
      fx += x_[b];
    }
    const double r = fx > 0.0 ? fy / fx : e.value;
    const double mean_x = fx / static_cast<double>(full);
    double ss = 0.0;
    for (size_t b = 0; b < full; ++b) {
      const double z = y_[b] - r * x_[b];
      ss += z * z;
    }
    const double var_mean = ss / (static_cast<double>(full) - 1.0) / static_cast<double>(full);
    e.std_error = mean_x > 0.0 ? std::sqrt(var_mean) / mean_x : std::numeric_limits<double>::infinity();
    return e;
  }

 private:
  long batch_size_;
  size_t num_batches_;
  std::vector<double> y_;
  std::vector<double> x_;
};

bool succeeds(double signal, double interference, double noise, double rate) {
  return signal / (interference + noise) >= std::expm1(rate * std::log(2.0));
}

}  // namespace

const char* to_string(CorrelationMode mode) {
  return mode == CorrelationMode::faithful ? "faithful" : "decorrelated";
}

CorrelationMode parse_correlation_mode(const std::string& name) {
  if (name == "faithful") return CorrelationMode::faithful;
  if (name == "decorrelated") return CorrelationMode::decorrelated;
  throw ConfigError("unknown correlation mode '" + name + "'");
}

SimReport simulate(const SystemParams& params, const Policy& policy, const SimConfig& sim) {
  if (sim.slots < 1) throw DomainError("simulate: need at least one slot");
  const DerivedQuantities d = derive(params, policy.sensing_time);
  const ActionLayout layout = make_layout(d, params.battery_capacity);
  check_policy(policy, layout);
  if (sim.initial_battery < 0 || sim.initial_battery > params.battery_capacity) {
    throw DomainError("simulate: initial battery outside [0, N_max]");
  }

  const SensingConfig sensing = make_sensing_config(params, policy.sensing_time, policy.threshold);
  const double pf = false_alarm(sensing);
  const double pd_avg = detection_avg(sensing, d.avg_sensing_snr);

  const double t = params.slot;
  const double t_tx = t - policy.sensing_time;
  const double noise = params.noise_power;
  const double pp = params.pu_power;
  const double nature_mean = params.nature_rate * t;
  const double harvest_scale = params.rf_efficiency * pp * t / params.packet_energy;
  const double rf_mean_packets = harvest_scale * params.links.pst.mean_gain();

  auto pu_rng = substream(sim.seed, kPuActivity);
  auto gp_rng = substream(sim.seed, kGainP);
  auto gpst_rng = substream(sim.seed, kGainPst);
  auto gps_rng = substream(sim.seed, kGainPs);
  auto gs_rng = substream(sim.seed, kGainS);
  auto gsp_rng = substream(sim.seed, kGainSp);
  auto action_rng = substream(sim.seed, kAction);
  auto sensing_rng = substream(sim.seed, kSensing);
  auto nature_rng = substream(sim.seed, kNature);
  auto rf_rng = substream(sim.seed, kRf);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> exp_p(1.0 / params.links.p.mean_gain());
  std::exponential_distribution<double> exp_pst(1.0 / params.links.pst.mean_gain());
  std::exponential_distribution<double> exp_ps(1.0 / params.links.ps.mean_gain());
  std::exponential_distribution<double> exp_s(1.0 / params.links.s.mean_gain());
  std::exponential_distribution<double> exp_sp(1.0 / params.links.sp.mean_gain());
  std::poisson_distribution<int> nature(nature_mean > 0.0 ? nature_mean : 1.0);
  const bool rf_enabled = rf_mean_packets > 0.0;
  // floor(scale * Exp) is geometric with success probability 1 - e^{-E_u/(mean harvest energy)}.
  std::geometric_distribution<int> rf_draw(rf_enabled ? -std::expm1(-1.0 / rf_mean_packets) : 0.5);

  const int cap = params.battery_capacity;
  SimReport rep;
  rep.slots = sim.slots;
  rep.histogram.assign(static_cast<size_t>(cap) + 1, 0);
  rep.min_battery_seen = sim.initial_battery;
  rep.max_battery_seen = sim.initial_battery;

  BatchSeries pu_series(sim.slots, sim.batches);
  BatchSeries su_series(sim.slots, sim.batches);
  BatchSeries sense_series(sim.slots, sim.batches);
  BatchSeries access_series(sim.slots, sim.batches);
  std::vector<BatchSeries> level_series(static_cast<size_t>(cap) + 1, BatchSeries(sim.slots, sim.batches));

  int battery = sim.initial_battery;
  for (long slot = 0; slot < sim.slots; ++slot) {
    rep.histogram[static_cast<size_t>(battery)]++;
    level_series[static_cast<size_t>(battery)].add(slot, 1.0);
    for (int lvl = 0; lvl <= cap; ++lvl) {
      if (lvl != battery) level_series[static_cast<size_t>(lvl)].add(slot, 0.0);
    }

    const bool pu_active = unit(pu_rng) < params.pu_activity;
    const double g_p = exp_p(gp_rng);
    const double g_pst = exp_pst(gpst_rng);
    const double g_ps = exp_ps(gps_rng);
    const double g_s = exp_s(gs_rng);
    const double g_sp = exp_sp(gsp_rng);

    const ActionMix mix = action_mix(policy, layout, battery);
    const double u = unit(action_rng);
    Action action = Action::idle;
    if (u < mix.blind) {
      action = Action::blind;
    } else if (u < mix.blind + mix.sense) {
      action = Action::sense;
    }

    int consumed = 0;
    bool su_tx = false;
    double su_power = 0.0;
    double su_rate = 0.0;
    switch (action) {
      case Action::idle:
        rep.actions.idle++;
        break;
      case Action::blind:
        rep.actions.blind++;
        consumed = d.transmit_packets;
        su_tx = true;
        su_power = params.transmit_energy / t;
        su_rate = d.su_rate_blind;
        break;
      case Action::sense: {
        rep.actions.sense++;
        consumed = d.sensing_packets;
        bool declared_busy = false;
        if (pu_active) {
          const double pd = sim.mode == CorrelationMode::faithful
                                ? detection_instant(sensing, pp * g_pst / noise)
                                : pd_avg;
          declared_busy = unit(sensing_rng) < pd;
        } else {
          declared_busy = unit(sensing_rng) < pf;
        }
        if (!declared_busy) {
          consumed += d.transmit_packets;
          su_tx = true;
          su_power = params.transmit_energy / t_tx;
          su_rate = d.su_rate_sensing;
        }
        break;
      }
    }
    if (su_tx) rep.actions.su_transmissions++;

    if (pu_active) {
      rep.pu_active_slots++;
      const bool ok = succeeds(pp * g_p, su_tx ? su_power * g_sp : 0.0, noise, d.pu_rate);
      pu_series.add(slot, ok ? 1.0 : 0.0, 1.0);
    } else {
      pu_series.add(slot, 0.0, 0.0);
    }
    const bool su_ok = su_tx && succeeds(su_power * g_s, pu_active ? pp * g_ps : 0.0, noise, su_rate);
    su_series.add(slot, su_ok ? 1.0 : 0.0);
    sense_series.add(slot, action == Action::sense ? 1.0 : 0.0);
    access_series.add(slot, action == Action::blind ? 1.0 : 0.0);

    int harvested = nature_mean > 0.0 ? nature(nature_rng) : 0;
    if (pu_active && rf_enabled) {
      harvested += sim.mode == CorrelationMode::faithful ? static_cast<int>(std::floor(harvest_scale * g_pst))
                                                         : rf_draw(rf_rng);
    }
    const int after = battery - consumed;
    if (after < 0) throw NumericError("simulate: battery went negative");
    battery = static_cast<int>(std::min<long>(cap, static_cast<long>(after) + harvested));
    rep.min_battery_seen = std::min(rep.min_battery_seen, battery);
    rep.max_battery_seen = std::max(rep.max_battery_seen, battery);
  }

  rep.mu_p = pu_series.ratio(sim.slots);
  rep.mu_s = su_series.ratio(sim.slots);
  rep.p_sense = sense_series.ratio(sim.slots);
  rep.p_access = access_series.ratio(sim.slots);
  for (const auto& s : level_series) rep.occupancy.push_back(s.ratio(sim.slots));
  return rep;
}

bool ComparisonReport::any_flag() const {
  return std::any_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.flagged; });
}

ComparisonReport compare(const SystemParams& params, const Policy& policy, const SimConfig& sim,
                         const CompareOptions& options) {
  OperatingPoint op = make_operating_point(params, policy.sensing_time, policy.threshold);
  if (options.detection_bias != 0.0) {
    op.detection = std::clamp(op.detection + options.detection_bias, 0.0, 1.0);
    op.chain.detection = op.detection;
  }
  const PerformanceReport ana = evaluate(op, policy);

  ComparisonReport out;
  out.sim = simulate(params, policy, sim);
  out.insufficient_data = sim.slots < options.min_slots;

  auto add = [&](std::string name, double analytic, const Estimate& e, double n_eff) {
    ComparisonRow row;
    row.quantity = std::move(name);
    row.analytic = analytic;
    row.empirical = e.value;
    // Zero-visit cells give a zero batch variance; the Bernoulli standard
    // error at the analytic value bounds it from below.
    const double floor_se =
        n_eff > 0.0 ? std::sqrt(std::max(analytic * (1.0 - analytic), 0.0) / n_eff) : 0.0;
    row.std_error = std::max(e.std_error, floor_se);
    const double diff = e.value - analytic;
    if (row.std_error > 0.0) {
      row.z = diff / row.std_error;
    } else {
      row.z = std::abs(diff) <= 1e-12 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    row.flagged = !out.insufficient_data && std::abs(row.z) > options.z_limit;
    out.rows.push_back(std::move(row));
  };

  const double n = static_cast<double>(out.sim.slots);
  const double n_pu = static_cast<double>(out.sim.pu_active_slots);
  if (out.sim.pu_active_slots > 0) add("mu_p", ana.mu_p, out.sim.mu_p, n_pu);
  add("mu_s", ana.mu_s, out.sim.mu_s, n);
  add("p_S", ana.p_sense, out.sim.p_sense, n);
  add("p_A", ana.p_access, out.sim.p_access, n);
  for (int lvl = 0; lvl < static_cast<int>(out.sim.occupancy.size()); ++lvl) {
    add("pi_" + std::to_string(lvl), ana.pi.pi[lvl], out.sim.occupancy[static_cast<size_t>(lvl)], n);
  }
  return out;
}

}  // namespace ehcr
