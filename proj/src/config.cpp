#include "vixb/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "vixb/error.hpp"

namespace vixb {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class ExprParser {
 public:
  explicit ExprParser(const std::string& t) : text_(t) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + text_.substr(pos_) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("bad number '" + text_ + "': " + msg);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+'))
        v += product();
      else if (eat('-'))
        v -= product();
      else
        return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const double d = unary();
        if (d == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    skip();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double v = 0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("expected a non-negative integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError("expected a boolean, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_real_expression(item));
  }
  return out;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double parse_real_expression(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty number");
  const double v = ExprParser(t).parse();
  if (!std::isfinite(v)) throw ConfigError("non-finite number '" + t + "'");
  return v;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  std::optional<double> sigma0;
  bool v0_given = false;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    if (seen.count(key))
      throw ConfigError(where + "duplicate key '" + key + "' (first on line " +
                        std::to_string(seen[key]) + ")");
    seen[key] = line_no;
    try {
      auto real = [&] { return parse_real_expression(val); };
      auto& p = c.params;
      if (key == "s0") p.s0 = real();
      else if (key == "alpha") p.alpha = real();
      else if (key == "sigma0") sigma0 = real();
      else if (key == "v0") { p.v0 = real(); v0_given = true; }
      else if (key == "kappa") p.kappa = real();
      else if (key == "theta") p.theta = real();
      else if (key == "eta") p.eta = real();
      else if (key == "rho") p.rho = real();
      else if (key == "vol_floor") p.vol_floor = real();
      else if (key == "vol_cap") p.vol_cap = real();
      else if (key == "t0") p.t0 = real();
      else if (key == "T") p.t_end = real();
      else if (key == "dt") p.dt = real();
      else if (key == "N") c.n_fit = parse_u64(val);
      else if (key == "N_tilde") c.n_eval = parse_u64(val);
      else if (key == "psi_degree") c.basis.psi_degree = static_cast<int>(parse_u64(val));
      else if (key == "phi_degree") c.basis.phi_degree = static_cast<int>(parse_u64(val));
      else if (key == "standardize") c.basis.standardize = parse_bool(val);
      else if (key == "phi_form") c.basis.phi_form = parse_phi_form(val);
      else if (key == "strikes") c.strikes = parse_list(val);
      else if (key == "seed_fit") c.seed_fit = parse_u64(val);
      else if (key == "seed_eval") c.seed_eval = parse_u64(val);
      else if (key == "oracle.n_outer") c.oracle.n_outer = parse_u64(val);
      else if (key == "oracle.n_inner") c.oracle.n_inner = parse_u64(val);
      else if (key == "antithetic") c.antithetic = parse_bool(val);
      else if (key == "kernel") c.kernel = val;
      else throw ConfigError("unknown key '" + key + "'");
    } catch (const Error& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (sigma0) {
    if (!(*sigma0 >= 0)) throw ConfigError(source + ": sigma0 must be non-negative");
    const double implied = *sigma0 * *sigma0;
    if (v0_given && std::abs(std::sqrt(c.params.v0) - *sigma0) > 1e-12 * std::max(1.0, *sigma0))
      throw ConfigError(source + ": sigma0 and v0 disagree (sigma0 must equal sqrt(v0))");
    if (!v0_given) c.params.v0 = implied;
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  RunConfig c = parse_config(in, file.string());
  validate_config(c);
  return c;
}

void validate_config(const RunConfig& c) {
  const auto errors = validate(c.params);
  if (!errors.empty()) {
    std::string msg = "invalid model parameters:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw ConfigError(msg);
  }
  const std::size_t n_win = make_grid(c.params).n_window();
  const std::size_t width = c.basis.width(n_win);
  if (c.n_fit < 10 * width)
    throw ConfigError("N = " + std::to_string(c.n_fit) + " is too small for " +
                      std::to_string(width) + " design columns (need 10x)");
  if (c.n_eval < 2) throw ConfigError("N_tilde must be at least 2");
  if (c.antithetic && (c.n_fit % 2 || c.n_eval % 2))
    throw ConfigError("antithetic sampling needs even N and N_tilde");
  for (double k : c.strikes)
    if (!(k > 0)) throw ConfigError("strikes must be positive");
  if (c.oracle.n_outer > 0) {
    if (c.oracle.n_outer < 2) throw ConfigError("oracle.n_outer must be 0 or at least 2");
    if (c.oracle.n_inner < 2 || c.oracle.n_inner % 2)
      throw ConfigError("oracle.n_inner must be even and at least 2");
  }
  if (c.kernel != "auto" && c.kernel != "scalar" && c.kernel != "avx2")
    throw ConfigError("kernel must be auto, scalar or avx2");
}

std::string to_manifest(const RunConfig& c) {
  std::ostringstream os;
  const auto& p = c.params;
  os << "# resolved run configuration\n";
  os << "s0 = " << fmt17(p.s0) << '\n';
  os << "alpha = " << fmt17(p.alpha) << '\n';
  os << "# sigma0 = " << fmt17(effective_vol(p, p.s0, p.v0)) << " (implied by v0)\n";
  os << "v0 = " << fmt17(p.v0) << '\n';
  os << "kappa = " << fmt17(p.kappa) << '\n';
  os << "theta = " << fmt17(p.theta) << '\n';
  os << "eta = " << fmt17(p.eta) << '\n';
  os << "rho = " << fmt17(p.rho) << '\n';
  os << "vol_floor = " << fmt17(p.vol_floor) << '\n';
  os << "vol_cap = " << fmt17(p.vol_cap) << '\n';
  os << "t0 = " << fmt17(p.t0) << '\n';
  os << "T = " << fmt17(p.t_end) << '\n';
  os << "dt = " << fmt17(p.dt) << '\n';
  os << "N = " << c.n_fit << '\n';
  os << "N_tilde = " << c.n_eval << '\n';
  os << "psi_degree = " << c.basis.psi_degree << '\n';
  os << "phi_degree = " << c.basis.phi_degree << '\n';
  os << "standardize = " << (c.basis.standardize ? 1 : 0) << '\n';
  os << "phi_form = " << phi_form_name(c.basis.phi_form) << '\n';
  os << "strikes = ";
  for (std::size_t i = 0; i < c.strikes.size(); ++i) os << (i ? ", " : "") << fmt17(c.strikes[i]);
  if (c.strikes.empty()) os << ",";
  os << '\n';
  os << "seed_fit = " << c.seed_fit << '\n';
  os << "seed_eval = " << c.seed_eval << '\n';
  os << "oracle.n_outer = " << c.oracle.n_outer << '\n';
  os << "oracle.n_inner = " << c.oracle.n_inner << '\n';
  os << "antithetic = " << (c.antithetic ? 1 : 0) << '\n';
  os << "kernel = " << c.kernel << '\n';
  return os.str();
}

}  // namespace vixb
