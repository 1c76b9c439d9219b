#include <algorithm>
#include <thread>

#include "bhsi/observer.hpp"

namespace bhsi {

ObserverState::ObserverState(std::size_t outcomes, std::optional<std::size_t> beta, std::string id)
    : outcomes_(outcomes), beta_(beta), id_(std::move(id)) {
  if (outcomes_ == 0) {
    throw ArgumentError("observer register needs at least one outcome");
  }
  if (beta_ && *beta_ >= outcomes_) {
    throw ArgumentError("observer reading " + std::to_string(*beta_) + " out of range");
  }
}

ObserverState ObserverState::ready(std::size_t outcomes, std::string id) {
  return ObserverState(outcomes, std::nullopt, std::move(id));
}

ObserverState ObserverState::reads(std::size_t outcomes, std::size_t beta, std::string id) {
  return ObserverState(outcomes, beta, std::move(id));
}

StateVector ObserverState::register_state() const {
  return StateVector::basis(SpaceDescription({subsystem()}), level());
}

std::string ObserverState::describe() const {
  return beta_ ? "reads g_" + std::to_string(*beta_) : std::string("ready");
}

namespace {

struct KernelGeometry {
  std::size_t sys_stride;
  std::size_t env_stride;
  std::size_t obs_stride;
  std::size_t sys_dim;
  std::size_t env_dim;
  std::size_t obs_dim;
  std::size_t total;

  bool is_base(std::size_t i) const {
    return (i / sys_stride) % sys_dim == 0 && (i / env_stride) % env_dim == 0 && (i / obs_stride) % obs_dim == 0;
  }
};

KernelGeometry geometry(const SpaceDescription& space, const std::string& sys_id, std::size_t outcomes,
                        const EnvironmentModel& env, const std::string& observer_id) {
  const Subsystem& s = space.subsystem(sys_id);
  const Subsystem& l = space.subsystem(env.id);
  const Subsystem& o = space.subsystem(observer_id);
  if (s.dim != outcomes || l.dim != env.dimension() || o.dim != outcomes + 1) {
    throw CompositionError("space does not match system, environment and observer register dimensions");
  }
  return {space.stride(s.id), space.stride(l.id), space.stride(o.id), s.dim, l.dim, o.dim, space.dimension()};
}

void check_beta(std::size_t beta, std::size_t outcomes) {
  if (beta >= outcomes) {
    throw ArgumentError("outcome index " + std::to_string(beta) + " out of range");
  }
}

// Λ_β: swap the |g_β E_β⟩ components between register levels 0 and β+1.
void engage_kernel(const SpaceDescription& space, Vector& psi, const std::string& sys_id, std::size_t outcomes,
                   const EnvironmentModel& env, const std::string& observer_id, std::size_t beta) {
  check_beta(beta, outcomes);
  const KernelGeometry g = geometry(space, sys_id, outcomes, env, observer_id);
  const Vector& e = env.pointers[beta].amplitudes();
  const std::size_t up = (beta + 1) * g.obs_stride;
  for (std::size_t base = 0; base < g.total; ++base) {
    if (!g.is_base(base)) {
      continue;
    }
    const std::size_t at = base + beta * g.sys_stride;
    Complex a0 = 0.0;
    Complex a1 = 0.0;
    for (std::size_t l = 0; l < g.env_dim; ++l) {
      const Complex ce = std::conj(e[static_cast<Eigen::Index>(l)]);
      a0 += ce * psi[static_cast<Eigen::Index>(at + l * g.env_stride)];
      a1 += ce * psi[static_cast<Eigen::Index>(at + up + l * g.env_stride)];
    }
    const Complex delta = a1 - a0;
    for (std::size_t l = 0; l < g.env_dim; ++l) {
      const Complex el = e[static_cast<Eigen::Index>(l)];
      psi[static_cast<Eigen::Index>(at + l * g.env_stride)] += el * delta;
      psi[static_cast<Eigen::Index>(at + up + l * g.env_stride)] -= el * delta;
    }
  }
}

void flip_kernel(const SpaceDescription& space, Vector& psi, const std::string& observer_id, std::size_t beta) {
  const Subsystem& o = space.subsystem(observer_id);
  check_beta(beta, o.dim - 1);
  const std::size_t stride = space.stride(o.id);
  const std::size_t up = (beta + 1) * stride;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    if ((i / stride) % o.dim == 0) {
      std::swap(psi[static_cast<Eigen::Index>(i)], psi[static_cast<Eigen::Index>(i + up)]);
    }
  }
}

template <typename Kernel>
LinearOperator dense_from_kernel(const SpaceDescription& space, Kernel&& kernel) {
  if (space.dimension() > kMaxDenseDimension) {
    throw CapacityError("space too large for a dense operator");
  }
  const auto n = static_cast<Eigen::Index>(space.dimension());
  Matrix m(n, n);
  Vector column(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    column.setZero();
    column[j] = 1.0;
    kernel(column);
    m.col(j) = column;
  }
  return LinearOperator(space, std::move(m), true);
}

}  // namespace

void apply_engage(const SpaceDescription& space, Vector& amplitudes, const BranchingOperator& b,
                  const std::string& observer_id, std::size_t beta) {
  engage_kernel(space, amplitudes, b.system_id(), b.outcomes(), b.environment(), observer_id, beta);
}

void apply_record_flip(const SpaceDescription& space, Vector& amplitudes, const std::string& observer_id,
                       std::size_t beta) {
  flip_kernel(space, amplitudes, observer_id, beta);
}

void apply_disengage(const SpaceDescription& space, Vector& amplitudes, const BranchingOperator& b,
                     const std::string& observer_id, std::size_t beta) {
  // Γ_β = T_β Λ_β
  apply_engage(space, amplitudes, b, observer_id, beta);
  flip_kernel(space, amplitudes, observer_id, beta);
}

LinearOperator engage_operator(const SpaceDescription& space, const BranchingOperator& b,
                               const std::string& observer_id, std::size_t beta) {
  return dense_from_kernel(space, [&](Vector& v) { apply_engage(space, v, b, observer_id, beta); });
}

LinearOperator record_flip_operator(const SpaceDescription& space, const std::string& observer_id, std::size_t beta) {
  return dense_from_kernel(space, [&](Vector& v) { apply_record_flip(space, v, observer_id, beta); });
}

LinearOperator disengage_operator(const SpaceDescription& space, const BranchingOperator& b,
                                  const std::string& observer_id, std::size_t beta) {
  return dense_from_kernel(space, [&](Vector& v) { apply_disengage(space, v, b, observer_id, beta); });
}

LinearOperator measurement_operator(const SpaceDescription& space, const BranchingOperator& b,
                                    const std::string& observer_id, std::size_t beta) {
  return dense_from_kernel(space, [&](Vector& v) {
    b.apply_in_place(space, v, false);
    apply_engage(space, v, b, observer_id, beta);
    apply_record_flip(space, v, observer_id, beta);
    apply_disengage(space, v, b, observer_id, beta);
  });
}

EngagedState::EngagedState(std::shared_ptr<const BranchedState> branched, ObserverState observer)
    : branched_(std::move(branched)), observer_(std::move(observer)) {
  if (!branched_) {
    throw ArgumentError("engaged state needs a branched state");
  }
  if (observer_.outcomes() != branched_->outcomes()) {
    throw CompositionError("observer register does not match the branch count");
  }
}

StateVector EngagedState::joint() const {
  const ObserverState fresh = ObserverState::ready(observer_.outcomes(), observer_.id());
  const StateVector full = tensor(branched_->joint(), fresh.register_state());
  if (observer_.is_ready()) {
    return full;
  }
  Vector psi = full.amplitudes();
  engage_kernel(full.space(), psi, branched_->system_id(), branched_->outcomes(), branched_->environment(),
                observer_.id(), *observer_.reading());
  return StateVector(full.space(), std::move(psi));
}

namespace {

std::size_t inverse_cdf(const std::vector<double>& weights, const std::vector<std::size_t>& candidates, Rng& rng) {
  double total = 0.0;
  for (std::size_t k : candidates) {
    total += weights[k];
  }
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  for (std::size_t k : candidates) {
    cumulative += weights[k];
    if (u < cumulative) {
      return k;
    }
  }
  return candidates.back();
}

}  // namespace

std::size_t sample_branch(const BranchedState& bs, Rng& rng) {
  if (bs.branches().empty()) {
    throw StateError("no live branches to sample");
  }
  std::vector<std::size_t> live;
  live.reserve(bs.branches().size());
  for (const auto& br : bs.branches()) {
    live.push_back(br.index);
  }
  return inverse_cdf(bs.weights(), live, rng);
}

std::vector<double> conditional_weights(const BranchedState& bs,
                                        const std::vector<std::pair<std::string, std::size_t>>& given) {
  std::vector<std::string> ids;
  for (const auto& [id, level] : given) {
    ids.push_back(id);
  }
  ids.push_back(bs.system_id());
  const SpaceDescription& space = bs.joint().space();
  const SpaceDescription sel = space.select(ids);
  if (sel.size() != ids.size()) {
    throw ArgumentError("conditioning subsystems must be distinct");
  }
  const std::vector<double> marginal = marginal_probabilities(bs.joint(), ids);

  std::vector<std::size_t> digits(sel.size());
  for (const auto& [id, level] : given) {
    digits[sel.position(id)] = level;
  }
  const std::size_t sys_pos = sel.position(bs.system_id());
  std::vector<double> p(bs.outcomes());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    digits[sys_pos] = k;
    p[k] = marginal[sel.compose(digits)];
    total += p[k];
  }
  if (total < kPruneThreshold) {
    throw StateError("conditioning outcome has zero probability");
  }
  for (double& x : p) {
    x /= total;
  }
  return p;
}

std::size_t sample_branch_given(const BranchedState& bs, const std::vector<std::pair<std::string, std::size_t>>& given,
                                Rng& rng) {
  const std::vector<double> p = conditional_weights(bs, given);
  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] >= kPruneThreshold) {
      candidates.push_back(k);
    }
  }
  return inverse_cdf(p, candidates, rng);
}

EngagedState engage(std::shared_ptr<const BranchedState> bs, std::size_t beta, std::string observer_id) {
  if (!bs) {
    throw ArgumentError("engage needs a branched state");
  }
  if (!bs->is_live(beta)) {
    throw ArgumentError("outcome " + std::to_string(beta) + " is not a live branch");
  }
  const std::size_t d = bs->outcomes();
  return EngagedState(std::move(bs), ObserverState::reads(d, beta, std::move(observer_id)));
}

EngagedState engage(const BranchedState& bs, std::size_t beta, std::string observer_id) {
  return engage(std::make_shared<const BranchedState>(bs), beta, std::move(observer_id));
}

Disengaged disengage(const EngagedState& es) {
  if (es.observer().is_ready()) {
    throw StateError("observer is already disengaged");
  }
  return {es.branched_ptr(), ObserverState::ready(es.observer().outcomes(), es.observer().id())};
}

Measurement measure(const StateVector& s, const BranchingOperator& b, Rng& rng, const std::string& observer_id,
                    std::uint64_t trial) {
  if (!s.space().contains(observer_id)) {
    throw PreconditionError("state has no observer register '" + observer_id + "'");
  }
  StateVector system_part = [&] {
    try {
      return factor_out(s, observer_id, 0);
    } catch (const StateError&) {
      throw PreconditionError("observer '" + observer_id + "' is not ready");
    }
  }();
  auto bs = std::make_shared<const BranchedState>(branch(system_part, b));

  const SpaceDescription& space = s.space();
  Vector psi = s.amplitudes();
  b.apply_in_place(space, psi, false);
  StateVector branched(space, psi);

  const std::size_t beta = sample_branch(*bs, rng);
  apply_engage(space, psi, b, observer_id, beta);
  StateVector engaged(space, psi);
  apply_record_flip(space, psi, observer_id, beta);
  apply_disengage(space, psi, b, observer_id, beta);
  StateVector after(space, std::move(psi));

  const double drift = max_abs_diff(after, branched);
  if (drift > kStructuralTol) {
    throw InvariantError("measurement disturbed the branched state by " + std::to_string(drift));
  }
  MeasurementRecord record{beta, bs->weights()[beta], trial, rng.seed(), trial};
  return Measurement{record, std::move(bs), ObserverState::ready(b.outcomes(), observer_id),
                     StageTrace{s, std::move(branched), std::move(engaged), std::move(after)}};
}

TrialRun run_trials(const StateVector& prepared, const BranchingOperator& b, std::size_t n, const TrialOptions& opts) {
  if (n == 0) {
    throw ArgumentError("trial count must be at least 1");
  }
  auto bs = std::make_shared<const BranchedState>(branch(prepared, b));
  std::vector<MeasurementRecord> records(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng = Rng::for_trial(opts.seed, t, opts.stream);
      const std::size_t beta = sample_branch(*bs, rng);
      const EngagedState es = engage(bs, beta, opts.observer_id);
      records[t] = MeasurementRecord{beta, bs->weights()[beta], t, opts.seed, opts.order_offset + t};
      disengage(es);
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, n);
  if (jobs == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (n + jobs - 1) / jobs;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      threads.emplace_back(work, begin, std::min(n, begin + chunk));
    }
  }

  std::vector<std::size_t> counts(b.outcomes(), 0);
  for (const auto& r : records) {
    ++counts[r.outcome];
  }
  return TrialRun{std::move(bs), std::move(counts), std::move(records)};
}

}  // namespace bhsi
