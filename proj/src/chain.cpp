#include "ehcr/chain.hpp"

#include <algorithm>
#include <sstream>

#include "ehcr/error.hpp"

namespace ehcr {

namespace {

constexpr double kPolicyTol = 1e-12;

struct Outcome {
  double probability;
  bool pu_active;
  int consumed;
};

}  // namespace

ActionLayout make_layout(const DerivedQuantities& derived, int capacity) {
  ActionLayout layout;
  layout.transmit_packets = derived.transmit_packets;
  layout.sensing_packets = derived.sensing_packets;
  layout.capacity = capacity;
  if (layout.beta_size() < 1) throw ConfigError("sensing branch unreachable: N_t + N_s > N_max");
  return layout;
}

void check_policy(const Policy& policy, const ActionLayout& layout) {
  if (static_cast<int>(policy.alpha.size()) != layout.alpha_size() ||
      static_cast<int>(policy.beta1.size()) != layout.beta_size() ||
      static_cast<int>(policy.beta2.size()) != layout.beta_size()) {
    std::ostringstream msg;
    msg << "policy shape mismatch: expected alpha[" << layout.alpha_size() << "], beta[" << layout.beta_size()
        << "], got alpha[" << policy.alpha.size() << "], beta1[" << policy.beta1.size() << "], beta2["
        << policy.beta2.size() << "]";
    throw ConfigError(msg.str());
  }
  auto in_unit = [](double v) { return v >= -kPolicyTol && v <= 1.0 + kPolicyTol; };
  for (double a : policy.alpha) {
    if (!in_unit(a)) throw DomainError("policy: alpha entry outside [0,1]");
  }
  for (size_t k = 0; k < policy.beta1.size(); ++k) {
    if (!in_unit(policy.beta1[k]) || !in_unit(policy.beta2[k]) ||
        policy.beta1[k] + policy.beta2[k] > 1.0 + kPolicyTol) {
      throw DomainError("policy: beta entries must satisfy 0 <= beta1, beta2 and beta1 + beta2 <= 1");
    }
  }
}

Policy idle_policy(const ActionLayout& layout, double tau, double threshold) {
  Policy p;
  p.alpha.assign(static_cast<size_t>(layout.alpha_size()), 0.0);
  p.beta1.assign(static_cast<size_t>(layout.beta_size()), 0.0);
  p.beta2.assign(static_cast<size_t>(layout.beta_size()), 0.0);
  p.sensing_time = tau;
  p.threshold = threshold;
  return p;
}

ActionMix action_mix(const Policy& policy, const ActionLayout& layout, int level) {
  ActionMix mix;
  if (level >= layout.beta_begin()) {
    const auto k = static_cast<size_t>(level - layout.beta_begin());
    mix.blind = policy.beta1[k];
    mix.sense = policy.beta2[k];
  } else if (level >= layout.alpha_begin()) {
    mix.blind = policy.alpha[static_cast<size_t>(level - layout.alpha_begin())];
  }
  mix.idle = std::max(0.0, 1.0 - mix.blind - mix.sense);
  return mix;
}

ChainModel make_chain_model(const SystemParams& params, const DerivedQuantities& derived, double detection,
                            double false_alarm) {
  ChainModel model;
  model.layout = make_layout(derived, params.battery_capacity);
  model.pu_activity = params.pu_activity;
  model.idle_harvest = HarvestPmf::tabulate(HarvestKind::nature, params);
  model.active_harvest = HarvestPmf::tabulate(HarvestKind::combined, params);
  model.detection = detection;
  model.false_alarm = false_alarm;
  return model;
}

Eigen::VectorXd action_row(const ChainModel& model, int level, Action action) {
  const ActionLayout& lay = model.layout;
  const double rho = model.pu_activity;
  const int nt = lay.transmit_packets;
  const int ns = lay.sensing_packets;

  Outcome outcomes[4];
  int count = 0;
  switch (action) {
    case Action::idle:
      outcomes[count++] = {1.0 - rho, false, 0};
      outcomes[count++] = {rho, true, 0};
      break;
    case Action::blind:
      outcomes[count++] = {1.0 - rho, false, nt};
      outcomes[count++] = {rho, true, nt};
      break;
    case Action::sense:
      // Busy verdict costs only the sensing energy; an idle verdict is
      // followed by a transmission.
      outcomes[count++] = {(1.0 - rho) * model.false_alarm, false, ns};
      outcomes[count++] = {(1.0 - rho) * (1.0 - model.false_alarm), false, ns + nt};
      outcomes[count++] = {rho * model.detection, true, ns};
      outcomes[count++] = {rho * (1.0 - model.detection), true, ns + nt};
      break;
  }

  const int cap = lay.capacity;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(lay.num_states());
  for (int o = 0; o < count; ++o) {
    const Outcome& out = outcomes[o];
    if (out.probability == 0.0) continue;
    if (out.consumed > level) throw ConfigError("action consumes more energy than the battery holds");
    const HarvestPmf& h = out.pu_active ? model.active_harvest : model.idle_harvest;
    const int remaining = level - out.consumed;
    for (int j = remaining; j < cap; ++j) row[j] += out.probability * h.pmf(j - remaining);
    row[cap] += out.probability * h.tail_at_least(cap - remaining);
  }
  return row;
}

double TransitionMatrix::row_sum_error() const {
  return (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

TransitionMatrix build_transition_matrix(const ChainModel& model, const Policy& policy) {
  check_policy(policy, model.layout);
  const int n = model.layout.num_states();
  TransitionMatrix tm;
  tm.p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const ActionMix mix = action_mix(policy, model.layout, i);
    if (mix.idle > 0.0) tm.p.row(i) += mix.idle * action_row(model, i, Action::idle).transpose();
    if (mix.blind > 0.0) tm.p.row(i) += mix.blind * action_row(model, i, Action::blind).transpose();
    if (mix.sense > 0.0) tm.p.row(i) += mix.sense * action_row(model, i, Action::sense).transpose();
  }
  return tm;
}

std::vector<std::vector<int>> closed_classes(const TransitionMatrix& matrix) {
  const int n = matrix.num_states();
  // Transitive closure of the support graph.
  std::vector<std::vector<bool>> reach(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < n; ++j) {
      if (matrix.p(i, j) > 0.0) reach[i][j] = true;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  std::vector<std::vector<int>> classes;
  std::vector<bool> assigned(static_cast<size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<int> cls;
    for (int j = 0; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) cls.push_back(j);
    }
    for (int j : cls) assigned[j] = true;
    // Closed iff nothing outside the class is reachable from it.
    bool closed = true;
    for (int j = 0; j < n && closed; ++j) {
      if (reach[i][j] && !reach[j][i]) closed = false;
    }
    if (closed) classes.push_back(std::move(cls));
  }
  return classes;
}

StationaryDistribution stationary_distribution(const TransitionMatrix& matrix) {
  const int n = matrix.num_states();
  const auto classes = closed_classes(matrix);
  if (classes.size() > 1) {
    std::ostringstream msg;
    msg << "stationary distribution is not unique; closed classes:";
    for (const auto& cls : classes) {
      msg << " {";
      for (size_t k = 0; k < cls.size(); ++k) msg << (k ? "," : "") << cls[k];
      msg << "}";
    }
    throw AmbiguityError(msg.str());
  }

  Eigen::MatrixXd a = matrix.p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;
  StationaryDistribution dist;
  dist.pi = a.fullPivLu().solve(rhs);
  dist.pi = dist.pi.cwiseMax(0.0);
  dist.pi /= dist.pi.sum();
  return dist;
}

double stationary_residual(const StationaryDistribution& dist, const TransitionMatrix& matrix) {
  return (dist.pi.transpose() * matrix.p - dist.pi.transpose()).lpNorm<Eigen::Infinity>();
}

AccessStats access_stats(const StationaryDistribution& dist, const Policy& policy, const ActionLayout& layout) {
  check_policy(policy, layout);
  AccessStats s;
  for (int k = 0; k < layout.alpha_size(); ++k) {
    s.p_access += dist.pi[layout.alpha_begin() + k] * policy.alpha[static_cast<size_t>(k)];
  }
  for (int k = 0; k < layout.beta_size(); ++k) {
    const double w = dist.pi[layout.beta_begin() + k];
    s.p_access += w * policy.beta1[static_cast<size_t>(k)];
    s.p_sense += w * policy.beta2[static_cast<size_t>(k)];
  }
  s.mean_sensing_time = s.p_sense * policy.sensing_time;
  return s;
}

}  // namespace ehcr
