#include "ibvp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ibvp/errors.hpp"
#include "ibvp/field_io.hpp"

namespace ibvp {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"grid", {"m"}},
    {"physics", {"omega2", "b1", "b2"}},
    {"truth", {"cells_per_side", "values", "file"}},
    {"data", {"file"}},
    {"schedule", {"levels"}},
    {"bundle", {"mode", "lhat0", "l0", "k", "eps", "exponent", "phi", "phi_c", "phi_beta", "phi_table"}},
    {"calibrate", {"ns", "samples"}},
    {"run", {"max_iter", "budget", "eta", "discrepancy_floor", "start", "seed"}},
    {"verify",
     {"alessandrini_trials", "alessandrini_pairs", "gradient_directions", "adjoint_pairs", "scaling_omega2",
      "stability_ns", "stability_samples"}},
    {"constants", {"omega2_grid", "n", "target_radius"}},
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& t) : tree_(t) {}

  std::optional<std::string> raw(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  double number(const std::string& key, double fallback) const {
    auto v = raw(key);
    return v ? to_number(key, *v) : fallback;
  }

  std::optional<double> maybe_number(const std::string& key) const {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return to_number(key, *v);
  }

  int integer(const std::string& key, int fallback) const {
    auto v = raw(key);
    return v ? to_int(key, *v) : fallback;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& s : split_list(*v)) out.push_back(to_number(key, s));
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    std::vector<int> out;
    for (const auto& s : split_list(*v)) out.push_back(to_int(key, s));
    return out;
  }

  static double to_number(const std::string& key, const std::string& s) {
    try {
      return parse_number(s);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
  }

  static int to_int(const std::string& key, const std::string& s) {
    const double v = to_number(key, s);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(key + ": expected an integer, got '" + s + "'");
    return static_cast<int>(v);
  }

 private:
  const pt::ptree& tree_;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

int block_side(int big_n) {
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(big_n))));
  return k * k == big_n ? k : -1;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    auto it = kSchema.find(section);
    if (it == kSchema.end()) throw ConfigError("config: unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key " + section + "." + key);
    }
  }

  const Reader r(tree);
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.m = r.integer("grid.m", c.m);
  c.omega2 = r.number("physics.omega2", c.omega2);
  c.b1 = r.number("physics.b1", c.b1);
  c.b2 = r.number("physics.b2", c.b2);
  if (!(c.m >= 3)) throw ConfigError("grid.m must be at least 3");
  if (!(c.omega2 > 0.0)) throw ConfigError("physics.omega2 must be positive");
  if (!(c.b1 > 0.0 && c.b1 <= c.b2)) throw ConfigError("physics: need 0 < b1 <= b2");

  if (tree.get_child_optional("truth")) {
    TruthSpec t;
    t.cells_per_side = r.integer("truth.cells_per_side", 1);
    t.values = r.numbers("truth.values", {});
    if (auto f = r.raw("truth.file")) t.file = base_dir / *f;
    if (!t.file && t.values.empty()) throw ConfigError("truth: give values or file");
    if (!t.file && static_cast<int>(t.values.size()) != t.cells_per_side * t.cells_per_side) {
      throw ConfigError("truth.values: expected " + std::to_string(t.cells_per_side * t.cells_per_side) +
                        " values for cells_per_side = " + std::to_string(t.cells_per_side) + ", got " +
                        std::to_string(t.values.size()));
    }
    c.truth = t;
  }
  if (auto f = r.raw("data.file")) c.data_file = base_dir / *f;
  if (tree.get_child_optional("schedule")) c.schedule = r.integers("schedule.levels", {});

  ConstantsBundle& b = c.bundle;
  const std::string mode = r.raw("bundle.mode").value_or("analytic");
  if (mode == "analytic") {
    b.calibration = ConstantsBundle::Calibration::analytic;
  } else if (mode == "empirical") {
    b.calibration = ConstantsBundle::Calibration::empirical;
  } else {
    throw ConfigError("bundle.mode: expected analytic or empirical, got '" + mode + "'");
  }
  b.lhat0 = r.number("bundle.lhat0", b.lhat0);
  b.l0 = r.number("bundle.l0", b.l0);
  b.big_k = r.number("bundle.k", b.big_k);
  b.eps = r.number("bundle.eps", b.eps);
  b.exponent = r.number("bundle.exponent", b.exponent);
  b.omega2 = c.omega2;
  b.b1 = c.b1;
  b.b2 = c.b2;
  const std::string phi = r.raw("bundle.phi").value_or("exact");
  if (phi == "exact") {
    b.phi = CompressionModel::exact();
  } else if (phi == "power") {
    b.phi = CompressionModel::power_law(r.number("bundle.phi_c", 1.0), r.number("bundle.phi_beta", 1.0));
  } else if (phi == "table") {
    std::vector<std::pair<double, double>> samples;
    for (const auto& item : split_list(r.raw("bundle.phi_table").value_or(""))) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("bundle.phi_table: expected N:phi pairs, got '" + item + "'");
      samples.emplace_back(Reader::to_number("bundle.phi_table", trim(item.substr(0, colon))),
                           Reader::to_number("bundle.phi_table", trim(item.substr(colon + 1))));
    }
    b.phi = CompressionModel::tabulated(std::move(samples));
  } else {
    throw ConfigError("bundle.phi: expected exact, power or table, got '" + phi + "'");
  }

  c.calibration.big_ns = r.integers("calibrate.ns", c.calibration.big_ns);
  c.calibration.samples_per_n = r.integer("calibrate.samples", c.calibration.samples_per_n);

  c.max_iter = r.integer("run.max_iter", c.max_iter);
  if (c.max_iter < 0) throw ConfigError("run.max_iter must be non-negative");
  if (auto v = r.raw("run.budget")) c.total_budget = Reader::to_int("run.budget", *v);
  const std::string eta = r.raw("run.eta").value_or("bundle");
  if (eta == "bundle") {
    c.eta_mode = EtaMode::bundle;
  } else if (eta == "oracle") {
    c.eta_mode = EtaMode::oracle;
  } else {
    c.eta_mode = EtaMode::fixed;
    c.eta_fixed = Reader::to_number("run.eta", eta);
    if (c.eta_fixed < 0.0) throw ConfigError("run.eta must be non-negative");
  }
  c.discrepancy_floor = r.number("run.discrepancy_floor", c.discrepancy_floor);
  c.start = r.maybe_number("run.start");
  if (auto v = r.raw("run.seed")) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("run.seed: expected an unsigned integer, got '" + *v + "'");
    }
  }

  VerifySettings& vs = c.verify;
  vs.alessandrini_trials = r.integer("verify.alessandrini_trials", vs.alessandrini_trials);
  vs.alessandrini_pairs = r.integer("verify.alessandrini_pairs", vs.alessandrini_pairs);
  vs.gradient_directions = r.integer("verify.gradient_directions", vs.gradient_directions);
  vs.adjoint_pairs = r.integer("verify.adjoint_pairs", vs.adjoint_pairs);
  vs.scaling_omega2 = r.numbers("verify.scaling_omega2", vs.scaling_omega2);
  vs.stability_ns = r.integers("verify.stability_ns", vs.stability_ns);
  vs.stability_samples = r.integer("verify.stability_samples", vs.stability_samples);

  c.constants.omega2_grid = r.numbers("constants.omega2_grid", c.constants.omega2_grid);
  c.constants.big_n = r.integer("constants.n", c.constants.big_n);
  c.constants.target_radius = r.maybe_number("constants.target_radius");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  return parse_config(in, path.parent_path());
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
  os << "[grid]\nm = " << c.m << "\n\n";
  os << "[physics]\nomega2 = " << format_number(c.omega2) << "\nb1 = " << format_number(c.b1)
     << "\nb2 = " << format_number(c.b2) << "\n\n";
  if (c.truth) {
    os << "[truth]\ncells_per_side = " << c.truth->cells_per_side << "\n";
    if (!c.truth->values.empty()) os << "values = " << join(c.truth->values) << "\n";
    if (c.truth->file) os << "file = " << c.truth->file->string() << "\n";
    os << "\n";
  }
  if (c.data_file) os << "[data]\nfile = " << c.data_file->string() << "\n\n";
  os << "[schedule]\nlevels = " << join(c.schedule) << "\n\n";

  const ConstantsBundle& b = c.bundle;
  os << "[bundle]\nmode = " << (b.calibration == ConstantsBundle::Calibration::analytic ? "analytic" : "empirical")
     << "\nlhat0 = " << format_number(b.lhat0) << "\nl0 = " << format_number(b.l0)
     << "\nk = " << format_number(b.big_k) << "\neps = " << format_number(b.eps)
     << "\nexponent = " << format_number(b.exponent) << "\n";
  switch (b.phi.form()) {
    case CompressionModel::Form::exact:
      os << "phi = exact\n";
      break;
    case CompressionModel::Form::power_law:
      os << "phi = power\nphi_c = " << format_number(b.phi.c_phi()) << "\nphi_beta = " << format_number(b.phi.beta())
         << "\n";
      break;
    case CompressionModel::Form::table: {
      os << "phi = table\nphi_table = ";
      const auto& s = b.phi.samples();
      for (std::size_t i = 0; i < s.size(); ++i)
        os << (i ? ", " : "") << format_number(s[i].first) << ":" << format_number(s[i].second);
      os << "\n";
      break;
    }
  }
  os << "\n[calibrate]\nns = " << join(c.calibration.big_ns) << "\nsamples = " << c.calibration.samples_per_n
     << "\n\n";

  os << "[run]\nmax_iter = " << c.max_iter << "\n";
  if (c.total_budget) os << "budget = " << *c.total_budget << "\n";
  os << "eta = ";
  switch (c.eta_mode) {
    case EtaMode::bundle:
      os << "bundle";
      break;
    case EtaMode::oracle:
      os << "oracle";
      break;
    case EtaMode::fixed:
      os << format_number(c.eta_fixed);
      break;
  }
  os << "\ndiscrepancy_floor = " << format_number(c.discrepancy_floor) << "\n";
  if (c.start) os << "start = " << format_number(*c.start) << "\n";
  os << "seed = " << c.seed << "\n\n";

  const VerifySettings& vs = c.verify;
  os << "[verify]\nalessandrini_trials = " << vs.alessandrini_trials
     << "\nalessandrini_pairs = " << vs.alessandrini_pairs << "\ngradient_directions = " << vs.gradient_directions
     << "\nadjoint_pairs = " << vs.adjoint_pairs << "\nscaling_omega2 = " << join(vs.scaling_omega2)
     << "\nstability_ns = " << join(vs.stability_ns) << "\nstability_samples = " << vs.stability_samples << "\n\n";

  os << "[constants]\nomega2_grid = " << join(c.constants.omega2_grid) << "\nn = " << c.constants.big_n << "\n";
  if (c.constants.target_radius) os << "target_radius = " << format_number(*c.constants.target_radius) << "\n";
}

void validate(const ExperimentConfig& c, bool need_schedule) {
  spectrum_guard(c.omega2, c.b1, c.b2);
  c.bundle.validate();
  if (need_schedule && c.schedule.empty()) throw UsageError("schedule.levels is empty");
  const int cells = c.m - 1;
  int prev = 0;
  for (int big_n : c.schedule) {
    const int k = big_n > 0 ? block_side(big_n) : -1;
    if (k < 0) throw ConfigError("schedule.levels: N = " + std::to_string(big_n) + " is not a perfect square");
    if (cells % k != 0) {
      throw ConfigError("schedule.levels: N = " + std::to_string(big_n) + " needs " + std::to_string(k) +
                        " blocks per side, which does not divide m - 1 = " + std::to_string(cells));
    }
    if (prev > 0 && k % prev != 0) {
      throw ConfigError("schedule.levels: N = " + std::to_string(big_n) + " does not refine N = " +
                        std::to_string(prev * prev));
    }
    prev = k;
  }
  if (c.truth && !c.truth->file && cells % c.truth->cells_per_side != 0) {
    throw ConfigError("truth.cells_per_side = " + std::to_string(c.truth->cells_per_side) +
                      " does not divide m - 1 = " + std::to_string(cells));
  }
  if (c.eta_mode == EtaMode::oracle && !c.truth) throw ConfigError("run.eta = oracle needs a [truth] section");
}

std::vector<PartitionPtr> build_schedule(const ExperimentConfig& c, const GridPtr& grid) {
  std::vector<PartitionPtr> out;
  for (int big_n : c.schedule) {
    const int k = block_side(big_n);
    if (out.empty()) {
      out.push_back(make_uniform_partition(grid, k));
    } else {
      const int prev = *out.back()->blocks_per_side();
      out.push_back(k == prev ? out.back() : refine_partition(out.back(), k / prev));
    }
  }
  return out;
}

PwcField build_truth(const ExperimentConfig& c, const GridPtr& grid) {
  if (!c.truth) throw ConfigError("no [truth] section");
  if (c.truth->file) {
    if (!std::filesystem::exists(*c.truth->file)) throw IoError("truth file not found: " + c.truth->file->string());
    return load_pwc(*c.truth->file, grid, c.bounds());
  }
  const int k = c.truth->cells_per_side;
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.truth->values.data(), c.truth->values.size());
  PwcField f(make_uniform_partition(grid, k), v, c.bounds());
  if (!f.admissible()) throw ConfigError("truth.values must lie in [b1, b2]");
  return f;
}

}  // namespace ibvp
