#include "ibvp/field_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ibvp/errors.hpp"

namespace ibvp {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

double parse_number(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw IoError("not a number: '" + token + "'");
  return v;
}

void write_pwc(std::ostream& os, const PwcField& f) {
  os << "pwc " << f.size() << ' ' << f.partition().level() << '\n';
  for (int j = 0; j < f.size(); ++j) os << j << ' ' << format_number(f[j]) << '\n';
}

void write_nodal(std::ostream& os, const NodalField& f) {
  os << "nodal " << f.grid().m() << '\n';
  for (int n = 0; n < f.grid().node_count(); ++n) os << format_number(f[n]) << '\n';
}

namespace {

template <class W, class T>
void save_with(const std::filesystem::path& path, const T& value, W writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  writer(os, value);
  if (!os) throw IoError("write failed: " + path.string());
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return is;
}

std::string next_token(std::istream& is, const char* what) {
  std::string t;
  if (!(is >> t)) throw IoError(std::string("unexpected end of input reading ") + what);
  return t;
}

int next_int(std::istream& is, const char* what) {
  const std::string t = next_token(is, what);
  int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw IoError(std::string("bad integer for ") + what + ": " + t);
  return v;
}

}  // namespace

void save_pwc(const std::filesystem::path& path, const PwcField& f) { save_with(path, f, write_pwc); }
void save_nodal(const std::filesystem::path& path, const NodalField& f) { save_with(path, f, write_nodal); }

PwcField read_pwc(std::istream& is, const PartitionPtr& partition, Bounds bounds) {
  if (next_token(is, "header") != "pwc") throw IoError("expected 'pwc' header");
  const int n = next_int(is, "N");
  next_int(is, "level");
  if (n != partition->size()) {
    throw IoError("pwc file has N=" + std::to_string(n) + " but partition has " + std::to_string(partition->size()));
  }
  Eigen::VectorXd c(n);
  std::vector<bool> seen(n, false);
  for (int k = 0; k < n; ++k) {
    const int id = next_int(is, "cell_id");
    if (id < 0 || id >= n || seen[id]) throw IoError("bad or repeated cell id " + std::to_string(id));
    seen[id] = true;
    c[id] = parse_number(next_token(is, "coeff"));
  }
  return {partition, std::move(c), bounds};
}

PwcField load_pwc(const std::filesystem::path& path, const PartitionPtr& partition, Bounds bounds) {
  auto is = open_input(path);
  return read_pwc(is, partition, bounds);
}

PwcField load_pwc(const std::filesystem::path& path, const GridPtr& grid, Bounds bounds) {
  int n = 0;
  {
    auto is = open_input(path);
    if (next_token(is, "header") != "pwc") throw IoError("expected 'pwc' header in " + path.string());
    n = next_int(is, "N");
  }
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (k * k != n) throw IoError("pwc file N=" + std::to_string(n) + " is not a uniform k x k partition");
  return load_pwc(path, make_uniform_partition(grid, k), bounds);
}

NodalField read_nodal(std::istream& is) {
  if (next_token(is, "header") != "nodal") throw IoError("expected 'nodal' header");
  const int m = next_int(is, "m");
  auto grid = make_grid(m);
  Eigen::VectorXd v(grid->node_count());
  for (int n = 0; n < v.size(); ++n) v[n] = parse_number(next_token(is, "value"));
  return {std::move(grid), std::move(v)};
}

NodalField load_nodal(const std::filesystem::path& path) {
  auto is = open_input(path);
  return read_nodal(is);
}

}  // namespace ibvp
