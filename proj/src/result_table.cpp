#include "drcournot/result_table.hpp"

#include <cstdio>
#include <initializer_list>

namespace drcournot {

namespace {

void write_comments(std::ostream& os, const TableOptions& opt) {
  for (const auto& c : opt.comments) os << "# " << c << '\n';
}

class Row {
 public:
  Row(std::ostream& os, int precision) : os_(os), precision_(precision) {}
  ~Row() { os_ << '\n'; }

  Row& text(const std::string& s) {
    sep();
    os_ << s;
    return *this;
  }
  Row& num(double v) { return text(format_number(v, precision_)); }
  Row& blank() { return text(""); }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }

  std::ostream& os_;
  int precision_;
  bool first_ = true;
};

void header(std::ostream& os, std::initializer_list<const char*> cols) {
  bool first = true;
  for (const char* c : cols) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

}  // namespace

std::string format_number(double v, int precision) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

void write_result_table(std::ostream& os, const EquilibriumSolution& sol,
                        const SurplusReport& surplus, const TableOptions& opt) {
  write_comments(os, opt);
  header(os, {"hour", "r_mwh", "w", "h_mwh", "q_mwh", "price", "mu_t", "mu_h", "cs", "ps_thermal",
              "ps_hydro", "rebate"});
  double r = 0.0, w = 0.0, h = 0.0;
  for (std::size_t t = 0; t < sol.periods.size(); ++t) {
    const auto& p = sol.periods[t];
    const auto& s = surplus.periods.at(t);
    r += p.r;
    w += p.w;
    h += p.h;
    Row(os, opt.precision)
        .text(std::to_string(t + 1))
        .num(p.r)
        .num(p.w)
        .num(p.h)
        .num(p.q)
        .num(p.price)
        .num(p.mu_thermal)
        .num(p.mu_hydro)
        .num(s.consumer)
        .num(s.thermal)
        .num(s.hydro)
        .num(s.rebate);
  }
  const auto& tot = surplus.total;
  Row(os, opt.precision)
      .text("TOTAL")
      .num(r)
      .num(w)
      .num(h)
      .num(sol.total_q())
      .blank()
      .blank()
      .blank()
      .num(tot.consumer)
      .num(tot.thermal)
      .num(tot.hydro)
      .num(tot.rebate);
}

void write_comparison_table(std::ostream& os, const ComparisonReport& rep,
                            const TableOptions& opt) {
  write_comments(os, opt);
  header(os, {"hour", "q_no_dr", "q_dr", "delta_q", "reduction_pct", "price_no_dr", "price_dr",
              "delta_price", "cs_no_dr", "cs_dr", "ps_thermal_no_dr", "ps_thermal_dr",
              "ps_thermal_change_pct", "ps_hydro_no_dr", "ps_hydro_dr", "ps_hydro_change_pct",
              "rebate"});
  const auto pct = [](double dr, double base) {
    return base != 0.0 ? percent_change(dr, base) : 0.0;
  };
  for (std::size_t t = 0; t < rep.periods.size(); ++t) {
    const auto& c = rep.periods[t];
    const auto& a = rep.no_dr.periods.at(t);
    const auto& b = rep.dr.periods.at(t);
    Row(os, opt.precision)
        .text(std::to_string(t + 1))
        .num(c.q_no_dr)
        .num(c.q_dr)
        .num(c.delta_q)
        .num(c.reduction_pct)
        .num(c.price_no_dr)
        .num(c.price_dr)
        .num(c.delta_price)
        .num(a.consumer)
        .num(b.consumer)
        .num(a.thermal)
        .num(b.thermal)
        .num(pct(b.thermal, a.thermal))
        .num(a.hydro)
        .num(b.hydro)
        .num(pct(b.hydro, a.hydro))
        .num(b.rebate);
  }
  const auto& a = rep.no_dr.total;
  const auto& b = rep.dr.total;
  Row(os, opt.precision)
      .text("TOTAL")
      .num(a.q)
      .num(b.q)
      .num(rep.total_delta_q)
      .num(a.q != 0.0 ? 100.0 * (a.q - b.q) / a.q : 0.0)
      .blank()
      .blank()
      .blank()
      .num(a.consumer)
      .num(b.consumer)
      .num(a.thermal)
      .num(b.thermal)
      .num(pct(b.thermal, a.thermal))
      .num(a.hydro)
      .num(b.hydro)
      .num(pct(b.hydro, a.hydro))
      .num(b.rebate);
}

void write_sweep_table(std::ostream& os, const SweepTable& table, const TableOptions& opt) {
  write_comments(os, opt);
  header(os, {"p2", "price", "q_mwh", "reduction_pct", "cs", "ps_total", "cs_change_pct",
              "ps_change_pct", "status"});
  for (const auto& row : table.rows) {
    Row out(os, opt.precision);
    out.num(row.p2);
    if (!row.error.empty() && row.q == 0.0 && row.price == 0.0) {
      out.blank().blank().blank().blank().blank().blank().blank();
    } else {
      out.num(row.price)
          .num(row.q)
          .num(row.reduction_pct)
          .num(row.consumer_surplus)
          .num(row.generation_surplus)
          .num(row.cs_change_pct)
          .num(row.ps_change_pct);
    }
    std::string status = row.error.empty() ? to_string(row.status) : "failed: " + row.error;
    for (char& ch : status)
      if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    out.text(status);
  }
}

}  // namespace drcournot
