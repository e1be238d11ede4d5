#include "lqgame/model.hpp"

#include <Eigen/LU>

#include "lqgame/linalg.hpp"

namespace lqgame {
namespace {

constexpr double kPsdTol = 1e-10;  // negative-eigenvalue slack for PSD checks

void check_square(std::vector<Violation>& v, const MatrixXd& m,
                  const std::string& name) {
  if (m.rows() != m.cols()) {
    v.push_back({name, name + " must be square, got " +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols())});
  }
}

void check_psd(std::vector<Violation>& v, const MatrixXd& m,
               const std::string& name) {
  if (m.rows() != m.cols() || m.rows() == 0) return;
  if (min_eigenvalue(symmetrize(m)) < -kPsdTol) {
    v.push_back({name, name + " not positive semi-definite (min eigenvalue " +
                           std::to_string(min_eigenvalue(symmetrize(m))) + ")"});
  }
}

void check_pd(std::vector<Violation>& v, const MatrixXd& m,
              const std::string& name) {
  if (m.rows() != m.cols() || m.rows() == 0) return;
  double lo = min_eigenvalue(symmetrize(m));
  if (lo <= 0.0) {
    v.push_back({name, name + " not positive definite (min eigenvalue " +
                           std::to_string(lo) + ")"});
  }
}

void check_dims(std::vector<Violation>& v, bool ok, const std::string& field,
                const std::string& message) {
  if (!ok) v.push_back({field, message});
}

}  // namespace

std::vector<Violation> validate(const GameSpec& spec) {
  std::vector<Violation> v;
  if (spec.horizon < 1) {
    v.push_back({"horizon", "horizon must be at least 1"});
    return v;
  }
  const int q = spec.state_dim();
  if (q < 1 || spec.A.cols() != q) {
    v.push_back({"A", "A must be square with at least one row"});
    return v;
  }
  const int md = spec.defender_dim();
  const int ma = spec.attacker_dim();
  if (md < 1) v.push_back({"Bd", "defender must have at least one control channel"});

  check_dims(v, spec.Bd.rows() == q, "Bd",
             "Bd has " + std::to_string(spec.Bd.rows()) + " rows but A is " +
                 std::to_string(q) + "x" + std::to_string(q));
  check_dims(v, spec.Ba.rows() == q, "Ba",
             "Ba has " + std::to_string(spec.Ba.rows()) + " rows but A is " +
                 std::to_string(q) + "x" + std::to_string(q));
  check_dims(v, spec.C.rows() == q, "C",
             "C has " + std::to_string(spec.C.rows()) + " rows but A is " +
                 std::to_string(q) + "x" + std::to_string(q));
  check_dims(v, spec.D.cols() == q, "D",
             "D has " + std::to_string(spec.D.cols()) + " columns but A is " +
                 std::to_string(q) + "x" + std::to_string(q));
  check_dims(v, spec.E.rows() == spec.D.rows(), "E",
             "E has " + std::to_string(spec.E.rows()) + " rows but D has " +
                 std::to_string(spec.D.rows()));
  check_dims(v, spec.sigma_s.rows() == spec.C.cols(), "sigma_s",
             "sigma_s is " + std::to_string(spec.sigma_s.rows()) + "x" +
                 std::to_string(spec.sigma_s.cols()) + " but C has " +
                 std::to_string(spec.C.cols()) + " columns");
  check_dims(v, spec.sigma_o.rows() == spec.E.cols(), "sigma_o",
             "sigma_o is " + std::to_string(spec.sigma_o.rows()) + "x" +
                 std::to_string(spec.sigma_o.cols()) + " but E has " +
                 std::to_string(spec.E.cols()) + " columns");
  check_square(v, spec.sigma_s, "sigma_s");
  check_square(v, spec.sigma_o, "sigma_o");
  check_psd(v, spec.sigma_s, "sigma_s");
  check_psd(v, spec.sigma_o, "sigma_o");

  check_dims(v, spec.x0_mean.size() == q, "x0_mean",
             "x0_mean has length " + std::to_string(spec.x0_mean.size()) +
                 " but the state dimension is " + std::to_string(q));
  check_dims(v, spec.x0_cov.rows() == q && spec.x0_cov.cols() == q, "x0_cov",
             "x0_cov must be " + std::to_string(q) + "x" + std::to_string(q));
  if (spec.x0_cov.rows() == q && spec.x0_cov.cols() == q) {
    check_psd(v, spec.x0_cov, "x0_cov");
    if (spec.initial_kind == InitialStateKind::KnownExactly &&
        spec.x0_cov.cwiseAbs().maxCoeff() != 0.0) {
      v.push_back({"x0_cov",
                   "x0_cov must be exactly zero when the initial state is "
                   "known exactly"});
    }
  }

  const auto N = static_cast<std::size_t>(spec.horizon);
  check_dims(v, spec.Q.size() == N + 1, "Q",
             "Q must hold " + std::to_string(N + 1) +
                 " matrices (one per stage plus the terminal stage), got " +
                 std::to_string(spec.Q.size()));
  check_dims(v, spec.Rd.size() == N, "Rd",
             "Rd must hold " + std::to_string(N) + " matrices, got " +
                 std::to_string(spec.Rd.size()));
  check_dims(v, spec.Ra.size() == N, "Ra",
             "Ra must hold " + std::to_string(N) + " matrices, got " +
                 std::to_string(spec.Ra.size()));
  check_dims(v, spec.Od.size() == N, "Od",
             "Od must hold " + std::to_string(N) + " values, got " +
                 std::to_string(spec.Od.size()));
  check_dims(v, spec.Oa.size() == N, "Oa",
             "Oa must hold " + std::to_string(N) + " values, got " +
                 std::to_string(spec.Oa.size()));
  if (!v.empty()) return v;

  for (std::size_t n = 0; n <= N; ++n) {
    const std::string name = n == N ? "Q[terminal]" : "Q[" + std::to_string(n) + "]";
    check_dims(v, spec.Q[n].rows() == q && spec.Q[n].cols() == q, name,
               name + " must be " + std::to_string(q) + "x" + std::to_string(q));
    check_psd(v, spec.Q[n], name);
  }
  for (std::size_t n = 0; n < N; ++n) {
    const std::string rd = "Rd[" + std::to_string(n) + "]";
    const std::string ra = "Ra[" + std::to_string(n) + "]";
    check_dims(v, spec.Rd[n].rows() == md && spec.Rd[n].cols() == md, rd,
               rd + " must be " + std::to_string(md) + "x" + std::to_string(md));
    check_dims(v, spec.Ra[n].rows() == ma && spec.Ra[n].cols() == ma, ra,
               ra + " must be " + std::to_string(ma) + "x" + std::to_string(ma));
    check_pd(v, spec.Rd[n], rd);
    check_pd(v, spec.Ra[n], ra);
    if (spec.Od[n] < 0.0)
      v.push_back({"Od[" + std::to_string(n) + "]", "observation cost negative"});
    if (spec.Oa[n] < 0.0)
      v.push_back({"Oa[" + std::to_string(n) + "]", "jamming cost negative"});
  }
  return v;
}

bool perfect_observation(const GameSpec& spec) {
  if (spec.D.rows() != spec.D.cols() || spec.D.rows() != spec.A.rows())
    return false;
  const bool noiseless = spec.E.size() == 0 || spec.E.cwiseAbs().maxCoeff() == 0.0 ||
                         spec.sigma_o.size() == 0 ||
                         spec.sigma_o.cwiseAbs().maxCoeff() == 0.0;
  if (!noiseless) return false;
  Eigen::FullPivLU<MatrixXd> lu(spec.D);
  return lu.isInvertible();
}

namespace {
bool same_rule(const ObservationRule& a, const ObservationRule& b) {
  for (int i_d : {0, 1})
    for (int i_a : {0, 1})
      if (a.h(i_d, i_a) != b.h(i_d, i_a)) return false;
  return true;
}
}  // namespace

bool operator==(const GameSpec& a, const GameSpec& b) {
  auto eq = [](const MatrixXd& x, const MatrixXd& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  if (a.horizon != b.horizon || a.initial_kind != b.initial_kind ||
      a.info_structure != b.info_structure)
    return false;
  if (!eq(a.A, b.A) || !eq(a.Bd, b.Bd) || !eq(a.Ba, b.Ba) || !eq(a.C, b.C) ||
      !eq(a.D, b.D) || !eq(a.E, b.E) || !eq(a.sigma_s, b.sigma_s) ||
      !eq(a.sigma_o, b.sigma_o) || !eq(a.x0_cov, b.x0_cov))
    return false;
  if (a.x0_mean.size() != b.x0_mean.size() || a.x0_mean != b.x0_mean)
    return false;
  if (a.Q.size() != b.Q.size() || a.Rd.size() != b.Rd.size() ||
      a.Ra.size() != b.Ra.size() || a.Od != b.Od || a.Oa != b.Oa)
    return false;
  for (std::size_t i = 0; i < a.Q.size(); ++i)
    if (!eq(a.Q[i], b.Q[i])) return false;
  for (std::size_t i = 0; i < a.Rd.size(); ++i)
    if (!eq(a.Rd[i], b.Rd[i])) return false;
  for (std::size_t i = 0; i < a.Ra.size(); ++i)
    if (!eq(a.Ra[i], b.Ra[i])) return false;
  return same_rule(a.rule, b.rule);
}

std::string to_string(InfoStructure s) {
  switch (s) {
    case InfoStructure::DefenderLeads: return "defender_leads";
    case InfoStructure::AttackerLeads: return "attacker_leads";
    case InfoStructure::Simultaneous: return "simultaneous";
  }
  return "unknown";
}

GameSpec make_scalar_spec(int horizon, double a, double bd, double ba, double c,
                          double d, double e, double sigma_s, double sigma_o,
                          double x0_mean, double x0_cov, double q, double q_N,
                          double rd, double ra, double od, double oa,
                          InfoStructure info) {
  GameSpec s;
  s.horizon = horizon;
  auto m = [](double x) { return MatrixXd::Constant(1, 1, x); };
  s.A = m(a);
  s.Bd = m(bd);
  s.Ba = m(ba);
  s.C = m(c);
  s.D = m(d);
  s.E = m(e);
  s.sigma_s = m(sigma_s);
  s.sigma_o = m(sigma_o);
  s.initial_kind = x0_cov == 0.0 ? InitialStateKind::KnownExactly
                                 : InitialStateKind::Gaussian;
  s.x0_mean = VectorXd::Constant(1, x0_mean);
  s.x0_cov = m(x0_cov);
  s.Q.assign(static_cast<std::size_t>(horizon), m(q));
  s.Q.push_back(m(q_N));
  s.Rd.assign(static_cast<std::size_t>(horizon), m(rd));
  s.Ra.assign(static_cast<std::size_t>(horizon), m(ra));
  s.Od.assign(static_cast<std::size_t>(horizon), od);
  s.Oa.assign(static_cast<std::size_t>(horizon), oa);
  s.info_structure = info;
  return s;
}

}  // namespace lqgame
