#include "vixb/table_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vixb/error.hpp"

namespace vixb {
namespace {

std::string num(double x, NumberFormat f) {
  char buf[48];
  std::snprintf(buf, sizeof buf, f == NumberFormat::Fixed ? "%.4f" : "%.17g", x);
  return buf;
}

// value,ci or NA,NA
std::string pair(const BoundEstimate* e, NumberFormat f) {
  if (!e) return "NA,NA";
  return num(e->value, f) + "," + num(e->ci_half, f);
}

void row(std::ostream& os, const std::string& name, const std::string& strike,
         const BoundEstimate* lo, const BoundEstimate* up, const BoundEstimate* plain,
         const BoundEstimate* oracle, NumberFormat f) {
  os << name << ',' << strike << ',' << pair(lo, f) << ',' << pair(up, f) << ','
     << pair(plain, f) << ',' << pair(oracle, f) << '\n';
}

}  // namespace

void write_table(std::ostream& os, const DerivativeTable& t, NumberFormat f) {
  os << "instrument,strike,lower,lower_ci,upper,upper_ci,plain,plain_ci,oracle,oracle_ci\n";
  const TableColumn* o = t.oracle ? &*t.oracle : nullptr;
  row(os, "future", "NA", &t.lower.future, &t.upper.future, &t.plain.future,
      o ? &o->future : nullptr, f);
  row(os, "jensen", "NA", &t.jensen.vol_swap, &t.jensen.sqrt_var_swap, nullptr, nullptr, f);
  for (std::size_t i = 0; i < t.strikes.size(); ++i) {
    const std::string k = num(t.strikes[i], f);
    row(os, "call", k, &t.lower.call[i], &t.upper.call[i], &t.plain.call[i],
        o ? &o->call[i] : nullptr, f);
    row(os, "put", k, &t.lower.put[i], &t.upper.put[i], &t.plain.put[i],
        o ? &o->put[i] : nullptr, f);
    row(os, "cap", k, &t.lower.cap[i], &t.upper.cap[i], &t.plain.cap[i],
        o ? &o->cap[i] : nullptr, f);
    row(os, "swap", k, &t.lower.swap[i], &t.upper.swap[i], &t.plain.swap[i],
        o ? &o->swap[i] : nullptr, f);
  }
}

void write_sweep(std::ostream& os, const std::string& param, const std::vector<SweepRow>& rows,
                 NumberFormat f) {
  os << param << ",plain,plain_ci,lower,lower_ci,upper,upper_ci\n";
  for (const auto& r : rows)
    os << num(r.value, f) << ',' << pair(&r.plain, f) << ',' << pair(&r.lower, f) << ','
       << pair(&r.upper, f) << '\n';
}

void write_convergence(std::ostream& os, const ConvergenceResult& r, NumberFormat f) {
  os << "n_paths,low_lower,low_lower_ci,low_upper,low_upper_ci,low_plain,low_plain_ci,"
        "high_lower,high_lower_ci,high_upper,high_upper_ci,high_plain,high_plain_ci,"
        "oracle,oracle_ci\n";
  const BoundEstimate* o = r.oracle ? &*r.oracle : nullptr;
  for (const auto& c : r.rows)
    os << c.n_paths << ',' << pair(&c.low.lower, f) << ',' << pair(&c.low.upper, f) << ','
       << pair(&c.low.plain, f) << ',' << pair(&c.high.lower, f) << ','
       << pair(&c.high.upper, f) << ',' << pair(&c.high.plain, f) << ',' << pair(o, f) << '\n';
}

void write_oracle_column(std::ostream& os, std::span<const double> strikes, const TableColumn& c,
                         NumberFormat f) {
  os << "instrument,strike,value,ci\n";
  os << "future,NA," << pair(&c.future, f) << '\n';
  for (std::size_t i = 0; i < strikes.size(); ++i) {
    const std::string k = num(strikes[i], f);
    os << "call," << k << ',' << pair(&c.call[i], f) << '\n';
    os << "put," << k << ',' << pair(&c.put[i], f) << '\n';
    os << "cap," << k << ',' << pair(&c.cap[i], f) << '\n';
    os << "swap," << k << ',' << pair(&c.swap[i], f) << '\n';
  }
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
  if (!out.flush()) throw Error("write failed for " + file.string());
}

}  // namespace vixb
