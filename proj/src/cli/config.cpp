#include "tsbandit/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "tsbandit/cli/csv.hpp"
#include "tsbandit/errors.hpp"

namespace tsb::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::set<std::string, std::less<>> kKnownKeys = {
    "experiment_id", "policy",  "environment", "horizon", "episodes",    "seed",
    "checkpoints",   "mu_star", "delta",       "epsilon", "gap_max",     "arms",
    "family",        "means",   "alpha",       "beta",    "probabilities", "atoms"};

[[noreturn]] void field_error(std::string_view key, const ConfigEntry& entry,
                              const std::string& message) {
  throw ConfigError("line " + std::to_string(entry.line) + ": field '" + std::string(key) +
                    "': " + message);
}

class Reader {
 public:
  explicit Reader(const ConfigEntries& entries) : entries_(entries) {}

  bool has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

  const ConfigEntry& entry(std::string_view key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ConfigError("missing required field '" + std::string(key) + "'");
    }
    return it->second;
  }

  std::string text(std::string_view key) const { return entry(key).value; }

  double real(std::string_view key) const { return parse_real(key, entry(key), entry(key).value); }

  double real_or(std::string_view key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }

  std::int64_t integer(std::string_view key) const {
    const auto& e = entry(key);
    std::int64_t v = 0;
    const auto s = trim(e.value);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) field_error(key, e, "expected an integer");
    return v;
  }

  std::uint64_t unsigned_integer(std::string_view key) const {
    const auto& e = entry(key);
    std::uint64_t v = 0;
    const auto s = trim(e.value);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      field_error(key, e, "expected a nonnegative integer");
    }
    return v;
  }

  std::vector<double> reals(std::string_view key, std::string_view text_value) const {
    std::vector<double> out;
    std::string normalized(text_value);
    for (char& ch : normalized) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream in(normalized);
    std::string token;
    while (in >> token) out.push_back(parse_real(key, entry(key), token));
    if (out.empty()) field_error(key, entry(key), "expected a list of numbers");
    return out;
  }

  std::vector<double> reals(std::string_view key) const { return reals(key, entry(key).value); }

  // Scalar broadcast to `count` entries, or an explicit list of that length.
  std::vector<double> broadcast(std::string_view key, std::size_t count, double fallback) const {
    if (!has(key)) return std::vector<double>(count, fallback);
    auto values = reals(key);
    if (values.size() == 1) return std::vector<double>(count, values.front());
    if (values.size() != count) {
      field_error(key, entry(key), "expected 1 or " + std::to_string(count) + " values");
    }
    return values;
  }

  RewardFamily family() const {
    const auto v = trim(text("family"));
    if (v == "bernoulli") return RewardFamily::kBernoulli;
    if (v == "gaussian") return RewardFamily::kGaussianUnitVariance;
    field_error("family", entry("family"), "expected 'bernoulli' or 'gaussian'");
  }

 private:
  static double parse_real(std::string_view key, const ConfigEntry& e, std::string_view raw) {
    const auto s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      field_error(key, e, "expected a number, got '" + std::string(s) + "'");
    }
    return v;
  }

  const ConfigEntries& entries_;
};

std::string join_means(std::span<const double> means) {
  std::string out;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i) out += ' ';
    out += format_double(means[i]);
  }
  return out;
}

template <typename Build>
auto guarded(std::string_view key, const ConfigEntries& entries, Build&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    const auto it = entries.find(key);
    const int line = it == entries.end() ? 0 : it->second.line;
    throw ConfigError("line " + std::to_string(line) + ": field '" + std::string(key) +
                      "': " + ex.what());
  }
}

}  // namespace

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries entries;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnownKeys.contains(key)) {
      throw ConfigError("line " + std::to_string(line_number) + ": unknown field '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(line_number) + ": field '" + key +
                        "' has no value");
    }
    if (!entries.emplace(key, ConfigEntry{value, line_number}).second) {
      throw ConfigError("line " + std::to_string(line_number) + ": duplicate field '" + key + "'");
    }
    if (end == text.size()) break;
  }
  return entries;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

Experiment build_experiment(const ConfigEntries& entries) {
  const Reader r(entries);
  Experiment experiment;
  experiment.id = r.has("experiment_id") ? r.text("experiment_id") : "experiment";
  if (experiment.id.find_first_of(",\"\n") != std::string::npos) {
    field_error("experiment_id", r.entry("experiment_id"), "must not contain commas or quotes");
  }

  auto& config = experiment.config;
  const auto policy_name = r.text("policy");
  const auto kind = parse_policy_kind(policy_name);
  if (!kind) field_error("policy", r.entry("policy"), "unknown policy '" + policy_name + "'");
  config.policy.kind = *kind;
  config.horizon = r.integer("horizon");
  config.episodes = r.integer("episodes");
  config.master_seed = r.has("seed") ? r.unsigned_integer("seed") : 0;
  if (r.has("checkpoints")) {
    for (double t : r.reals("checkpoints")) {
      if (t != static_cast<double>(static_cast<std::int64_t>(t))) {
        field_error("checkpoints", r.entry("checkpoints"), "checkpoints must be integers");
      }
      config.checkpoints.push_back(static_cast<std::int64_t>(t));
    }
  }

  const auto env = r.text("environment");
  std::optional<FiniteSupportPrior> finite_prior;
  if (env == "fixed") {
    const auto means = r.reals("means");
    const auto family = r.family();
    config.environment =
        guarded("means", entries, [&] { return BanditInstance(means, family); });
    experiment.environment_descriptor = "fixed[" + to_string(family) + "](" + join_means(means) + ")";
  } else if (env == "product_beta") {
    const auto k = static_cast<std::size_t>(r.integer("arms"));
    ProductBetaPrior prior{r.broadcast("alpha", k, 1.0), r.broadcast("beta", k, 1.0)};
    experiment.environment_descriptor = "product_beta(K=" + std::to_string(k) + " alpha=" +
                                        join_means(prior.alpha) + " beta=" + join_means(prior.beta) +
                                        ")";
    config.environment = PriorSpec{std::move(prior)};
  } else if (env == "two_point") {
    TwoPointPrior prior{r.real("mu_star"), r.real("delta")};
    experiment.environment_descriptor = "two_point(mu_star=" + format_double(prior.mu_star) +
                                        " delta=" + format_double(prior.delta) + ")";
    finite_prior = as_finite_prior(prior);
    config.environment = PriorSpec{prior};
  } else if (env == "bpr_uniform_gap") {
    BprUniformGapPrior prior;
    prior.mu_star = r.real("mu_star");
    prior.epsilon = r.real("epsilon");
    prior.num_arms = static_cast<std::size_t>(r.integer("arms"));
    prior.gap_max = r.real_or("gap_max", 10.0 * prior.epsilon);
    experiment.environment_descriptor =
        "bpr_uniform_gap(mu_star=" + format_double(prior.mu_star) + " epsilon=" +
        format_double(prior.epsilon) + " K=" + std::to_string(prior.num_arms) +
        " gap_max=" + format_double(prior.gap_max) + ")";
    config.environment = PriorSpec{prior};
  } else if (env == "finite") {
    const auto family = r.family();
    FiniteSupportPrior prior;
    const auto atoms_text = r.text("atoms");
    std::size_t start = 0;
    std::string descriptor;
    while (start <= atoms_text.size()) {
      const auto stop = std::min(atoms_text.find(';', start), atoms_text.size());
      const auto means = r.reals("atoms", std::string_view(atoms_text).substr(start, stop - start));
      prior.atoms.push_back(guarded("atoms", entries, [&] { return BanditInstance(means, family); }));
      if (!descriptor.empty()) descriptor += " | ";
      descriptor += join_means(means);
      start = stop + 1;
    }
    prior.probabilities = r.reals("probabilities");
    experiment.environment_descriptor = "finite[" + to_string(family) + "](" + descriptor + ")";
    finite_prior = prior;
    config.environment = PriorSpec{std::move(prior)};
  } else {
    field_error("environment", r.entry("environment"), "unknown environment '" + env + "'");
  }
  if (const auto* prior = std::get_if<PriorSpec>(&config.environment)) {
    guarded("environment", entries, [&] {
      validate(*prior);
      return 0;
    });
  }

  auto& policy = config.policy;
  switch (policy.kind) {
    case PolicyKind::kThompsonBeta:
      if (const auto* prior = std::get_if<PriorSpec>(&config.environment)) {
        if (const auto* beta = std::get_if<ProductBetaPrior>(prior)) {
          policy.beta_alpha = beta->alpha;
          policy.beta_beta = beta->beta;
        }
      }
      break;
    case PolicyKind::kThompsonFinite:
      if (!finite_prior) {
        field_error("policy", r.entry("policy"),
                    "ts_finite needs environment 'two_point' or 'finite'");
      }
      policy.finite_prior = finite_prior;
      break;
    case PolicyKind::kBprTwoArm:
      policy.mu_star = r.real("mu_star");
      policy.delta = r.real("delta");
      break;
    case PolicyKind::kBprGeneral:
      policy.mu_star = r.real("mu_star");
      policy.epsilon = r.real("epsilon");
      break;
    default:
      break;
  }

  guarded("horizon", entries, [&] {
    validate(config);
    return 0;
  });
  return experiment;
}

}  // namespace tsb::cli
