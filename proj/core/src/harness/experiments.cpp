#include "msdict/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "msdict/counting_filter.hpp"
#include "msdict/harness/oracle.hpp"

namespace msdict::harness {

namespace {
double log_cubed(std::uint64_t n) { return std::pow(std::log2(static_cast<double>(n)), 3); }
}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> random_multiset(const MultisetShape& shape,
                                                                     std::mt19937_64& rng) {
  if (shape.max_multiplicity == 0) throw std::invalid_argument("random_multiset: max multiplicity must be positive");
  if (shape.mean_multiplicity < 1) throw std::invalid_argument("random_multiset: mean multiplicity below 1");
  const std::uint64_t mask = bits::low_mask(shape.universe_bits);
  if (shape.cardinality > mask) throw std::invalid_argument("random_multiset: universe too small");

  // 1 + Geometric(p) has mean 1/p.
  std::geometric_distribution<std::uint64_t> extra(1.0 / shape.mean_multiplicity);
  std::unordered_set<std::uint64_t> used;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> items;
  std::uint64_t total = 0;
  while (total < shape.cardinality) {
    std::uint64_t x = rng() & mask;
    if (!used.insert(x).second) continue;
    std::uint64_t f = shape.law == MultiplicityLaw::kOne ? 1 : 1 + extra(rng);
    f = std::min({f, shape.max_multiplicity, shape.cardinality - total});
    items.emplace_back(x, f);
    total += f;
  }
  return items;
}

std::vector<std::uint64_t> insertion_order(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& items,
                                           std::mt19937_64& rng) {
  std::vector<std::uint64_t> order;
  for (const auto& [x, f] : items) order.insert(order.end(), f, x);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// ---------------------------------------------------------------------------

double Claim2Stats::mean_cd_reroutes() const {
  if (trials.empty()) return 0;
  double s = 0;
  for (const auto& t : trials) s += static_cast<double>(t.full_cd_reroutes);
  return s / static_cast<double>(trials.size());
}

std::uint64_t Claim2Stats::max_cd_reroutes() const {
  std::uint64_t m = 0;
  for (const auto& t : trials) m = std::max(m, t.full_cd_reroutes);
  return m;
}

std::uint32_t Claim2Stats::trials_within_budget() const {
  return static_cast<std::uint32_t>(std::count_if(trials.begin(), trials.end(), [&](const Claim2Trial& t) {
    return static_cast<double>(t.full_cd_reroutes) <= budget;
  }));
}

bool Claim2Stats::any_overflow() const {
  return std::any_of(trials.begin(), trials.end(), [](const Claim2Trial& t) { return t.overflowed; });
}

Claim2Stats claim2_experiment(const Claim2Options& options) {
  Claim2Stats stats;
  stats.n = options.config.capacity_n;
  stats.universe_bits = options.config.universe_bits;
  stats.params = derive(options.config);
  stats.bound = static_cast<double>(stats.n) / log_cubed(stats.n);
  stats.budget = 5 * stats.bound;

  for (std::uint32_t t = 0; t < options.trials; ++t) {
    Claim2Trial trial;
    trial.seed = mix_seed(options.seed, t);
    std::mt19937_64 rng(trial.seed);
    DictConfig config = options.config;
    config.seed = mix_seed(trial.seed, 0xd1c7);
    MsDict dict(config);

    MultisetShape shape;
    shape.cardinality = stats.n;
    shape.universe_bits = config.universe_bits;
    shape.law = options.law;
    shape.mean_multiplicity = options.mean_multiplicity;
    shape.max_multiplicity = dict.params().T_heavy - 1;
    const auto items = random_multiset(shape, rng);
    trial.distinct = items.size();

    for (std::uint64_t x : insertion_order(items, rng)) {
      if (dict.insert(x) != Status::kOk) {
        trial.overflowed = dict.overflowed();
        break;
      }
      ++trial.inserted;
    }
    if (!trial.overflowed)
      for (const auto& [x, f] : items) trial.mismatches += dict.count(x) != f ? 1 : 0;

    const OpStats& s = dict.stats();
    trial.full_cd_reroutes = s.full_cd_reroutes;
    trial.full_bd_reroutes = s.full_bd_reroutes;
    trial.heavy_reroutes = s.heavy_reroutes;
    trial.spare_distinct_max = s.spare_distinct_max;
    stats.ops.merge(s);
    stats.trials.push_back(trial);
  }
  return stats;
}

// ---------------------------------------------------------------------------

double BalanceStats::max_ratio() const {
  double m = 0;
  for (const auto& t : trials) m = std::max(m, t.ratio);
  return m;
}

std::uint32_t BalanceStats::trials_within(double ratio) const {
  return static_cast<std::uint32_t>(
      std::count_if(trials.begin(), trials.end(), [&](const BalanceTrial& t) { return t.ratio <= ratio; }));
}

std::vector<std::uint64_t> part_loads(const FeistelPartitioner& p,
                                      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& items) {
  std::vector<std::uint64_t> loads(p.part_count(), 0);
  for (const auto& [x, f] : items) loads[p.partition(x).part] += f;
  return loads;
}

BalanceStats balance_experiment(const BalanceOptions& options) {
  if (options.parts == 0 || (options.parts & (options.parts - 1)) != 0)
    throw std::invalid_argument("balance_experiment: part count must be a power of two");
  BalanceStats stats;
  stats.n = options.n;
  stats.parts = options.parts;
  stats.mean_part = static_cast<double>(options.n) / options.parts;
  stats.max_multiplicity = static_cast<std::uint64_t>(std::ceil(log_cubed(options.n))) - 1;

  for (std::uint32_t t = 0; t < options.trials; ++t) {
    BalanceTrial trial;
    trial.seed = mix_seed(options.seed, t);
    std::mt19937_64 rng(trial.seed);
    const FeistelPartitioner partitioner =
        options.round_function
            ? FeistelPartitioner(options.universe_bits, options.parts, *options.round_function)
            : FeistelPartitioner(options.universe_bits, options.parts, options.independence,
                                 mix_seed(trial.seed, 0xba1));

    MultisetShape shape;
    shape.cardinality = options.n;
    shape.universe_bits = options.universe_bits;
    shape.max_multiplicity = stats.max_multiplicity;
    const auto items = random_multiset(shape, rng);

    const auto loads = part_loads(partitioner, items);
    std::vector<std::uint64_t> distinct(options.parts, 0);
    for (const auto& item : items) ++distinct[partitioner.partition(item.first).part];

    trial.max_part = *std::max_element(loads.begin(), loads.end());
    trial.min_part = *std::min_element(loads.begin(), loads.end());
    trial.max_part_distinct = *std::max_element(distinct.begin(), distinct.end());
    trial.ratio = static_cast<double>(trial.max_part) / stats.mean_part;
    trial.flagged = trial.ratio > options.flag_ratio;
    stats.trials.push_back(trial);
  }
  return stats;
}

// ---------------------------------------------------------------------------

double SpaceAudit::spare_and_seed_bits_per_element() const {
  return static_cast<double>(space.spare_bits + space.seed_bits) / static_cast<double>(config.capacity_n);
}

SpaceAudit space_audit(const DictConfig& config, std::uint64_t seed) {
  SpaceAudit audit;
  audit.config = config;
  audit.config.seed = mix_seed(config.seed, seed);
  MsDict dict(audit.config);
  audit.params = dict.params();

  std::mt19937_64 rng(mix_seed(seed, 0x5ace));
  MultisetShape shape;
  shape.cardinality = config.capacity_n;
  shape.universe_bits = config.universe_bits;
  shape.max_multiplicity = audit.params.T_heavy - 1;
  for (std::uint64_t x : insertion_order(random_multiset(shape, rng), rng)) {
    if (dict.insert(x) != Status::kOk) break;
  }
  audit.filled = dict.cardinality();
  audit.overflowed = dict.overflowed();
  audit.space = dict.space_report();
  audit.ops = dict.stats();
  return audit;
}

// ---------------------------------------------------------------------------

FilterStats filter_experiment(const FilterOptions& options) {
  FilterStats stats;
  stats.options = options;
  stats.threshold = options.epsilon + 3 * std::sqrt(options.epsilon / static_cast<double>(options.probes));
  const std::uint64_t mask = bits::low_mask(options.universe_bits);

  for (std::uint32_t t = 0; t < options.trials; ++t) {
    FilterTrial trial;
    trial.seed = mix_seed(options.seed, t);
    std::mt19937_64 rng(trial.seed);
    DictConfig config;
    config.capacity_n = options.n;
    config.universe_bits = options.universe_bits;
    config.seed = mix_seed(trial.seed, 0xf17);
    CountingFilter filter(config, options.epsilon);
    trial.range_bits = filter.range_bits();

    ReferenceMultiset truth;
    for (std::uint64_t i = 0; i < options.n; ++i) {
      const std::uint64_t x = rng() & mask;
      if (filter.insert(x) != Status::kOk) {
        trial.overflowed = true;
        break;
      }
      truth.insert(x);
    }
    for (std::uint64_t x : truth.elements()) trial.undercounts += filter.count(x) < truth.count(x) ? 1 : 0;

    while (trial.probes < options.probes) {
      const std::uint64_t x = rng() & mask;
      if (truth.count(x) != 0) continue;
      ++trial.probes;
      const std::uint64_t c = filter.count(x);
      trial.overcounts += c > 0 ? 1 : 0;
    }
    trial.overcount_fraction = static_cast<double>(trial.overcounts) / static_cast<double>(trial.probes);
    stats.trials.push_back(trial);
  }
  return stats;
}

}  // namespace msdict::harness
