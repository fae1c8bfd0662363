#include "accmm/theory.hpp"

#include <cmath>
#include <sstream>

#include "accmm/errors.hpp"
#include "accmm/trace.hpp"

namespace accmm {

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "acc_zom") return Algorithm::AccZom;
  if (name == "acc_zomda") return Algorithm::AccZomda;
  if (name == "acc_semi_zomda") return Algorithm::AccSemiZomda;
  if (name == "acc_mda") return Algorithm::AccMda;
  if (name == "zo_sgd") return Algorithm::ZoSgd;
  if (name == "sgda") return Algorithm::Sgda;
  throw config_error("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::AccZom: return "acc_zom";
    case Algorithm::AccZomda: return "acc_zomda";
    case Algorithm::AccSemiZomda: return "acc_semi_zomda";
    case Algorithm::AccMda: return "acc_mda";
    case Algorithm::ZoSgd: return "zo_sgd";
    case Algorithm::Sgda: return "sgda";
  }
  return "";
}

bool TheoryReport::has_failure() const {
  for (const TheoryRow& r : rows) {
    if (r.status == CheckStatus::Fail) return true;
  }
  return false;
}

const TheoryRow* TheoryReport::find(const std::string& condition) const {
  for (const TheoryRow& r : rows) {
    if (r.condition == condition) return &r;
  }
  return nullptr;
}

std::string TheoryReport::to_text() const {
  std::ostringstream out;
  for (const TheoryRow& r : rows) {
    const char* tag = r.status == CheckStatus::Pass   ? "PASS"
                      : r.status == CheckStatus::Fail ? "FAIL"
                                                      : "UNKNOWN";
    out << tag << "  " << r.condition;
    if (r.lhs.has_value() && r.rhs.has_value()) {
      out << "  [" << format_real(*r.lhs) << " vs " << format_real(*r.rhs) << "]";
    }
    if (!r.note.empty()) out << "  (" << r.note << ")";
    out << "\n";
  }
  for (const std::string& n : notes) out << "note: " << n << "\n";
  return out.str();
}

namespace {

void add_geq(TheoryReport& rep, const std::string& cond, std::optional<double> lhs,
             std::optional<double> rhs, const std::string& note = "") {
  TheoryRow row;
  row.condition = cond;
  row.lhs = lhs;
  row.rhs = rhs;
  row.note = note;
  if (lhs.has_value() && rhs.has_value()) {
    row.status = (*lhs >= *rhs) ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    row.status = CheckStatus::Unknown;
  }
  rep.rows.push_back(std::move(row));
}

void add_leq(TheoryReport& rep, const std::string& cond, std::optional<double> lhs,
             std::optional<double> rhs, const std::string& note = "") {
  TheoryRow row;
  row.condition = cond;
  row.lhs = lhs;
  row.rhs = rhs;
  row.note = note;
  if (lhs.has_value() && rhs.has_value()) {
    row.status = (*lhs <= *rhs) ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    row.status = CheckStatus::Unknown;
  }
  rep.rows.push_back(std::move(row));
}

void check_mini(TheoryReport& rep, const HyperParams& hp, const TheoryConstants& cs) {
  const double k3 = hp.k * hp.k * hp.k;
  add_geq(rep, "c >= 2/(3k^3) + 5/4", hp.c, 2.0 / (3.0 * k3) + 1.25);
  add_geq(rep, "m >= 2", hp.m, 2.0);
  add_geq(rep, "m >= (ck)^3", hp.m, std::pow(hp.c * hp.k, 3.0));
  add_geq(rep, "m >= k^3", hp.m, k3);

  std::optional<double> gamma_bound;
  if (cs.lipschitz.has_value() && cs.d > 0) {
    gamma_bound = std::min(std::cbrt(hp.m) / (2.0 * *cs.lipschitz * hp.k),
                           1.0 / (2.0 * std::sqrt(6.0 * cs.d) * *cs.lipschitz));
  }
  add_leq(rep, "gamma <= min(m^{1/3}/(2Lk), 1/(2 sqrt(6d) L))", hp.gamma, gamma_bound,
          cs.lipschitz.has_value() ? "" : "L unknown");

  if (cs.d > 0) {
    const double mu = hp.smoothing.mu.value_or(default_mu(cs.d, hp.m, hp.T));
    add_leq(rep, "mu <= 1/(d (m+T)^{2/3})", mu, default_mu(cs.d, hp.m, hp.T));
  }
}

void check_zomda(TheoryReport& rep, const HyperParams& hp, const TheoryConstants& cs) {
  const double k3 = hp.k * hp.k * hp.k;
  const double dt = static_cast<double>(cs.d1 + cs.d2);
  const std::optional<double> lf = cs.lipschitz_lf;
  const std::optional<double> tau = cs.tau;

  std::optional<double> c1_bound;
  if (tau.has_value()) c1_bound = 2.0 / (3.0 * k3) + 2.25 * *tau * *tau;
  add_geq(rep, "c1 >= 2/(3k^3) + 9 tau^2/4", hp.c1, c1_bound,
          tau.has_value() ? "" : "tau unknown");

  std::optional<double> c2_bound;
  if (lf.has_value() && dt > 0) c2_bound = 2.0 / (3.0 * k3) + 625.0 * dt * *lf * *lf / (3.0 * hp.b);
  add_geq(rep, "c2 >= 2/(3k^3) + 625 (d1+d2) L_f^2 / (3b)", hp.c2, c2_bound,
          lf.has_value() ? "" : "L_f unknown");

  add_geq(rep, "b >= 1", static_cast<double>(hp.b), 1.0);
  add_leq(rep, "b <= d1+d2", static_cast<double>(hp.b), dt > 0 ? std::optional<double>(dt) : std::nullopt);

  add_geq(rep, "m >= 2", hp.m, 2.0);
  add_geq(rep, "m >= k^3", hp.m, k3);
  add_geq(rep, "m >= (c1 k)^3", hp.m, std::pow(hp.c1 * hp.k, 3.0));
  add_geq(rep, "m >= (c2 k)^3", hp.m, std::pow(hp.c2 * hp.k, 3.0));

  std::optional<double> lambda_bound;
  if (lf.has_value() && tau.has_value()) {
    lambda_bound = std::min(1.0 / (6.0 * *lf), 75.0 * *tau / 24.0);
  }
  add_leq(rep, "lambda <= min(1/(6 L_f), 75 tau/24)", hp.lambda, lambda_bound,
          (lf.has_value() && tau.has_value()) ? "" : "L_f or tau unknown");

  std::optional<double> gamma_bound;
  if (lf.has_value() && tau.has_value() && dt > 0) {
    const double kappa = *lf / *tau;
    const double lg = *lf + *lf * *lf / *tau;
    const double first = (hp.lambda * *tau / (2.0 * *lf)) *
                         std::sqrt((6.0 * hp.b / dt) /
                                   (36.0 * hp.lambda * hp.lambda + 625.0 * kappa * kappa));
    gamma_bound = std::min(first, std::cbrt(hp.m) / (2.0 * lg * hp.k));
  }
  add_leq(rep,
          "gamma <= min(lambda tau/(2L_f) sqrt(6b/(d1+d2) / (36 lambda^2 + 625 kappa^2)), "
          "m^{1/3}/(2 L_g k))",
          hp.gamma, gamma_bound, (lf.has_value() && tau.has_value()) ? "" : "L_f or tau unknown");

  if (cs.d1 > 0 && cs.d2 > 0) {
    const double mu1 = hp.smoothing.mu1.value_or(default_mu1(cs.d1, hp.m, hp.T));
    const double mu2 = hp.smoothing.mu2.value_or(default_mu2(cs.d1, cs.d2, hp.m, hp.T));
    add_leq(rep, "mu1 <= 1/(d1 (m+T)^{2/3})", mu1, default_mu1(cs.d1, hp.m, hp.T));
    add_leq(rep, "mu2 <= 1/(sqrt(d1+d2) d2 (m+T)^{2/3})", mu2,
            default_mu2(cs.d1, cs.d2, hp.m, hp.T));
  }
}

void check_mda(TheoryReport& rep, const HyperParams& hp, const TheoryConstants& cs) {
  const double k3 = hp.k * hp.k * hp.k;
  const std::optional<double> lf = cs.lipschitz_lf;
  const std::optional<double> tau = cs.tau;

  std::optional<double> c1_bound;
  if (tau.has_value()) c1_bound = 2.0 / (3.0 * k3) + 2.25 * *tau * *tau;
  add_geq(rep, "c1 >= 2/(3k^3) + 9 tau^2/4", hp.c1, c1_bound,
          tau.has_value() ? "" : "tau unknown");

  add_geq(rep, "c2 >= 2/(3k^3) + 75 L_f^2/2", hp.c2,
          lf.has_value() ? std::optional<double>(2.0 / (3.0 * k3) + 37.5 * *lf * *lf)
                         : std::nullopt,
          lf.has_value() ? "" : "L_f unknown");

  add_geq(rep, "m >= 2", hp.m, 2.0);
  add_geq(rep, "m >= k^3", hp.m, k3);
  add_geq(rep, "m >= (c1 k)^3", hp.m, std::pow(hp.c1 * hp.k, 3.0));
  add_geq(rep, "m >= (c2 k)^3", hp.m, std::pow(hp.c2 * hp.k, 3.0));

  std::optional<double> lambda_bound;
  if (lf.has_value() && tau.has_value()) {
    lambda_bound = std::min(1.0 / (6.0 * *lf), 27.0 * hp.b * *tau / 16.0);
  }
  add_leq(rep, "lambda <= min(1/(6 L_f), 27 b tau/16)", hp.lambda, lambda_bound,
          (lf.has_value() && tau.has_value()) ? "" : "L_f or tau unknown");

  std::optional<double> gamma_bound;
  if (lf.has_value() && tau.has_value()) {
    const double kappa = *lf / *tau;
    const double lg = *lf + *lf * *lf / *tau;
    const double first =
        (hp.lambda * *tau / (2.0 * *lf)) *
        std::sqrt(2.0 * hp.b / (8.0 * hp.lambda * hp.lambda + 75.0 * kappa * kappa * hp.b));
    gamma_bound = std::min(first, std::cbrt(hp.m) / (2.0 * lg * hp.k));
  }
  add_leq(rep,
          "gamma <= min(lambda tau/(2L_f) sqrt(2b / (8 lambda^2 + 75 kappa^2 b)), "
          "m^{1/3}/(2 L_g k))",
          hp.gamma, gamma_bound, (lf.has_value() && tau.has_value()) ? "" : "L_f or tau unknown");
}

}  // namespace

TheoryReport check_theory_conditions(const HyperParams& hp, const TheoryConstants& constants,
                                     Algorithm algo) {
  TheoryReport rep;
  switch (algo) {
    case Algorithm::AccZom:
      check_mini(rep, hp, constants);
      break;
    case Algorithm::AccZomda:
    case Algorithm::AccSemiZomda:
      check_zomda(rep, hp, constants);
      break;
    case Algorithm::AccMda:
      check_mda(rep, hp, constants);
      break;
    case Algorithm::ZoSgd:
    case Algorithm::Sgda:
      rep.notes.push_back("baseline algorithm: no schedule conditions to check");
      break;
  }
  return rep;
}

}  // namespace accmm
