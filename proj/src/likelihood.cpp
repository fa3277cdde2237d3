#include "semicomp/likelihood.hpp"

#include <cmath>

#include "semicomp/errors.hpp"

namespace semicomp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::VectorXd pack(const MarginParams& m) {
  VectorXd v(m.beta.size() + m.dr.size());
  v << m.beta, m.dr;
  return v;
}

Eigen::VectorXd pack(const Theta1& t) {
  VectorXd v(t.alpha.size() + t.t.beta.size() + t.t.dr.size());
  v << t.alpha, t.t.beta, t.t.dr;
  return v;
}

Eigen::VectorXd pack(const ThetaFull& t) {
  const VectorXd a = pack(t.theta1);
  const VectorXd b = pack(t.theta_d);
  VectorXd v(a.size() + b.size());
  v << a, b;
  return v;
}

MarginParams unpack_margin(const Eigen::VectorXd& v, Index p) {
  return {v.head(p), v.tail(v.size() - p)};
}

Theta1 unpack_theta1(const Eigen::VectorXd& v, Index n_alpha, Index p) {
  return {v.head(n_alpha), unpack_margin(v.tail(v.size() - n_alpha), p)};
}

ThetaFull unpack_full(const Eigen::VectorXd& v, Index n_alpha, Index p, Index kappa_t) {
  const Index d1 = n_alpha + p + kappa_t;
  return {unpack_theta1(v.head(d1), n_alpha, p), unpack_margin(v.tail(v.size() - d1), p)};
}

namespace likelihood_detail {

struct MarginTerms {
  double lambda, e, u, du, ddu;
  double g[4];
};

// eps shifts the cumulative hazard G(R e) itself, so U = exp(-G - eps) stays below 1 at t = 0.
MarginTerms margin_terms(Transform g, double r, double e, double eps) {
  MarginTerms m{};
  m.lambda = r * e;
  m.e = e;
  const auto gd = g_derivs(g, m.lambda);
  for (int k = 0; k < 4; ++k) m.g[k] = gd[k];
  m.g[0] += eps;
  m.u = std::exp(-m.g[0]);
  m.du = -m.u * gd[1];
  m.ddu = m.u * (gd[1] * gd[1] - gd[2]);
  return m;
}

}  // namespace likelihood_detail

using likelihood_detail::MarginTerms;
using likelihood_detail::margin_terms;

namespace {

void check_jumps(const VectorXd& dr, Index expected) {
  if (dr.size() != expected) throw std::invalid_argument("jump vector does not match the event grid");
  for (Index l = 0; l < dr.size(); ++l)
    if (!(dr[l] > 0.0) || !std::isfinite(dr[l])) throw DomainError("baseline jumps must be positive");
}

VectorXd prefix_sums(const VectorXd& dr) {
  VectorXd cum(dr.size() + 1);
  cum[0] = 0.0;
  for (Index l = 0; l < dr.size(); ++l) cum[l + 1] = cum[l] + dr[l];
  return cum;
}

// Out(:, l) = sum over subjects with k_i > l of coef_i * rows_i.
MatrixXd suffix_rows(const std::vector<int>& k, const VectorXd& coef, const MatrixXd& rows, Index kappa) {
  MatrixXd bucket = MatrixXd::Zero(rows.cols(), kappa + 1);
  for (Index i = 0; i < coef.size(); ++i) bucket.col(k[i]) += coef[i] * rows.row(i).transpose();
  MatrixXd out(rows.cols(), kappa);
  VectorXd acc = VectorXd::Zero(rows.cols());
  for (Index l = kappa - 1; l >= 0; --l) {
    acc += bucket.col(l + 1);
    out.col(l) = acc;
  }
  return out;
}

// out[l] = sum over subjects with k_i > l of coef_i.
VectorXd suffix_scalar(const std::vector<int>& k, const VectorXd& coef, Index kappa) {
  VectorXd bucket = VectorXd::Zero(kappa + 1);
  for (Index i = 0; i < coef.size(); ++i) bucket[k[i]] += coef[i];
  VectorXd out(kappa);
  double acc = 0.0;
  for (Index l = kappa - 1; l >= 0; --l) out[l] = acc += bucket[l + 1];
  return out;
}

// (l, l') entry: sum over subjects with k_i > max(l, l') of coef_i.
MatrixXd suffix_square(const std::vector<int>& k, const VectorXd& coef, Index kappa) {
  const VectorXd s = suffix_scalar(k, coef, kappa);
  MatrixXd out(kappa, kappa);
  for (Index b = 0; b < kappa; ++b)
    for (Index a = 0; a < kappa; ++a) out(a, b) = s[std::max(a, b)];
  return out;
}

// (l, l') entry: sum over subjects with ka_i > l and kb_i > l' of coef_i.
MatrixXd suffix_pair(const std::vector<int>& ka, const std::vector<int>& kb, const VectorXd& coef, Index kappa_a,
                     Index kappa_b) {
  MatrixXd bucket = MatrixXd::Zero(kappa_a + 1, kappa_b + 1);
  for (Index i = 0; i < coef.size(); ++i) bucket(ka[i], kb[i]) += coef[i];
  for (Index a = kappa_a - 1; a >= 0; --a) bucket.row(a) += bucket.row(a + 1);
  for (Index b = kappa_b - 1; b >= 0; --b) bucket.col(b) += bucket.col(b + 1);
  return bucket.bottomRightCorner(kappa_a, kappa_b);
}

// Direct density terms delta (-G + log G' ) and their first two Lambda-derivatives.
double density_value(const MarginTerms& m) { return -m.g[0] + std::log(m.g[1]); }
double density_d1(const MarginTerms& m) { return -m.g[1] + m.g[2] / m.g[1]; }
double density_d2(const MarginTerms& m) {
  return -m.g[2] + (m.g[3] * m.g[1] - m.g[2] * m.g[2]) / (m.g[1] * m.g[1]);
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Single margin

MarginalLikelihood::MarginalLikelihood(Eigen::VectorXd time, Eigen::VectorXi delta, Eigen::MatrixXd z, Transform g,
                                       double epsilon0)
    : time_(std::move(time)), delta_(std::move(delta)), z_(std::move(z)), g_(g), eps_(epsilon0) {
  grid_ = make_grid(time_, delta_);
}

MarginalLikelihood MarginalLikelihood::terminal(const Dataset& d, Transform g_d) {
  return MarginalLikelihood(d.c, d.delta_d, d.z, g_d);
}

MarginalLikelihood MarginalLikelihood::nonterminal_naive(const Dataset& d, Transform g_t) {
  return MarginalLikelihood(d.x, d.delta_t, d.z, g_t);
}

Evaluation MarginalLikelihood::evaluate(const MarginParams& th, int order) const {
  const Index n = this->n();
  const Index p = z_.cols();
  const Index kappa = grid_.size();
  if (th.beta.size() != p) throw std::invalid_argument("beta dimension mismatch");
  check_jumps(th.dr, kappa);
  const VectorXd cum = prefix_sums(th.dr);
  const VectorXd eta = z_ * th.beta;

  VectorXd s1(n), s2(n), lam(n), e(n), delta(n);
  double value = 0.0;
  for (Index i = 0; i < n; ++i) {
    const MarginTerms m = margin_terms(g_, cum[grid_.count_le[i]], std::exp(eta[i]), eps_);
    const double d = delta_[i];
    value += -m.g[0];
    if (delta_[i] == 1) value += std::log(m.g[1]) + std::log(th.dr[grid_.event_index[i]]) + eta[i];
    s1[i] = -m.g[1] + d * m.g[2] / m.g[1];
    s2[i] = -m.g[2] + d * (m.g[3] * m.g[1] - m.g[2] * m.g[2]) / (m.g[1] * m.g[1]);
    lam[i] = m.lambda;
    e[i] = m.e;
    delta[i] = d;
  }
  Evaluation out;
  out.value = value / n;
  if (order < 1) return out;

  const VectorXd events = grid_.events.cast<double>();
  out.gradient.resize(p + kappa);
  out.gradient.head(p) = z_.transpose() * (s1.cwiseProduct(lam) + delta);
  out.gradient.tail(kappa) =
      suffix_scalar(grid_.count_le, s1.cwiseProduct(e), kappa) + events.cwiseQuotient(th.dr);
  out.gradient /= n;
  if (order < 2) return out;

  MatrixXd& h = out.hessian;
  h.resize(p + kappa, p + kappa);
  h.topLeftCorner(p, p) = z_.transpose() * (s2.cwiseProduct(lam).cwiseProduct(lam) + s1.cwiseProduct(lam)).asDiagonal() * z_;
  h.topRightCorner(p, kappa) =
      suffix_rows(grid_.count_le, (s2.cwiseProduct(lam) + s1).cwiseProduct(e), z_, kappa);
  h.bottomLeftCorner(kappa, p) = h.topRightCorner(p, kappa).transpose();
  h.bottomRightCorner(kappa, kappa) = suffix_square(grid_.count_le, s2.cwiseProduct(e).cwiseProduct(e), kappa);
  h.bottomRightCorner(kappa, kappa).diagonal() -= events.cwiseQuotient(th.dr.cwiseProduct(th.dr));
  h /= n;
  return out;
}

double MarginalLikelihood::loglik(const MarginParams& th) const { return evaluate(th, 0).value; }

Eigen::VectorXd MarginalLikelihood::score(const MarginParams& th) const {
  return evaluate(th, 1).gradient * static_cast<double>(n());
}

Eigen::MatrixXd MarginalLikelihood::information(const MarginParams& th) const { return -evaluate(th, 2).hessian; }

Eigen::MatrixXd MarginalLikelihood::subject_scores(const MarginParams& th) const {
  const Index n = this->n();
  const Index p = z_.cols();
  const Index kappa = grid_.size();
  check_jumps(th.dr, kappa);
  const VectorXd cum = prefix_sums(th.dr);
  MatrixXd out = MatrixXd::Zero(n, p + kappa);
  for (Index i = 0; i < n; ++i) {
    const double eta = z_.row(i).dot(th.beta);
    const MarginTerms m = margin_terms(g_, cum[grid_.count_le[i]], std::exp(eta), eps_);
    const double d = delta_[i];
    const double s1 = -m.g[1] + d * m.g[2] / m.g[1];
    out.row(i).head(p) = (s1 * m.lambda + d) * z_.row(i);
    out.row(i).segment(p, grid_.count_le[i]).setConstant(s1 * m.e);
    if (delta_[i] == 1) out(i, p + grid_.event_index[i]) += 1.0 / th.dr[grid_.event_index[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Joint likelihood

struct FullLikelihood::Prepared {
  const ThetaFull* th;
  VectorXd cum_t, cum_d;
  VectorXd eta_t, eta_d;
  VectorXd eta_alpha;  // linear predictor of the copula parameter
};

struct FullLikelihood::Subject {
  double value;
  double l_a, l_aa, l_ad, l_td;
  double s1[2], s2[2], a[2], s_td;
  double adot, addot;
  MarginTerms m[2];
};

FullLikelihood::FullLikelihood(const Dataset& data, CopulaSpec copula, Transform g_t, Transform g_d,
                               double epsilon_t, double epsilon_d)
    : data_(data), copula_(copula), g_t_(g_t), g_d_(g_d), eps_t_(epsilon_t), eps_d_(epsilon_d) {
  grid_t_ = make_grid(data_.x, data_.delta_t);
  grid_d_ = make_grid(data_.c, data_.delta_d);
  if (copula_.link) {
    if (data_.w.cols() == 0) throw std::invalid_argument("linked copula parameter needs copula covariates");
    w_ = data_.w;
  } else {
    w_ = MatrixXd::Ones(data_.size(), 1);
  }
}

Eigen::Index FullLikelihood::n_alpha() const { return w_.cols(); }

FullLikelihood::Prepared FullLikelihood::prepare(const ThetaFull& th) const {
  if (th.theta1.alpha.size() != n_alpha()) throw std::invalid_argument("copula parameter dimension mismatch");
  if (th.theta1.t.beta.size() != data_.p() || th.theta_d.beta.size() != data_.p())
    throw std::invalid_argument("beta dimension mismatch");
  check_jumps(th.theta1.t.dr, grid_t_.size());
  check_jumps(th.theta_d.dr, grid_d_.size());
  Prepared p;
  p.th = &th;
  p.cum_t = prefix_sums(th.theta1.t.dr);
  p.cum_d = prefix_sums(th.theta_d.dr);
  p.eta_t = data_.z * th.theta1.t.beta;
  p.eta_d = data_.z * th.theta_d.beta;
  p.eta_alpha = w_ * th.theta1.alpha;
  return p;
}

FullLikelihood::Subject FullLikelihood::subject(const Prepared& p, Index i, std::optional<double> u_d) const {
  Subject s{};
  const int dt = data_.delta_t[i];
  const int dd = data_.delta_d[i];
  s.m[0] = margin_terms(g_t_, p.cum_t[grid_t_.count_le[i]], std::exp(p.eta_t[i]), eps_t_);
  s.m[1] = margin_terms(g_d_, p.cum_d[grid_d_.count_le[i]], std::exp(p.eta_d[i]), eps_d_);
  const double ud = u_d ? *u_d : s.m[1].u;

  double alpha;
  if (copula_.link) {
    const auto ld = link_derivatives(*copula_.link, p.eta_alpha[i]);
    alpha = ld[0];
    s.adot = ld[1];
    s.addot = ld[2];
  } else {
    alpha = p.eta_alpha[i];
    s.adot = 1.0;
    s.addot = 0.0;
  }

  const CopulaDerivatives d = copula_derivatives(copula_.family, s.m[0].u, ud, alpha);
  auto F = [&](int a, int b, int c) { return d(a + dt, b + dd, c); };
  const double f0 = F(0, 0, 0);
  if (!(f0 > 0.0) || !std::isfinite(f0))
    throw DomainError("copula term is not positive; parameter outside the valid region");
  const double lt = F(1, 0, 0) / f0;
  const double ld = F(0, 1, 0) / f0;
  const double la = F(0, 0, 1) / f0;
  const double ltt = F(2, 0, 0) / f0 - lt * lt;
  const double ldd = F(0, 2, 0) / f0 - ld * ld;
  const double ltd = F(1, 1, 0) / f0 - lt * ld;
  const double lta = F(1, 0, 1) / f0 - lt * la;
  const double lda = F(0, 1, 1) / f0 - ld * la;
  const double laa = F(0, 0, 2) / f0 - la * la;

  s.value = std::log(f0);
  const int delta[2] = {dt, dd};
  const double lj[2] = {lt, ld}, ljj[2] = {ltt, ldd}, lja[2] = {lta, lda};
  const VectorXd* dr[2] = {&p.th->theta1.t.dr, &p.th->theta_d.dr};
  const EventGrid* grid[2] = {&grid_t_, &grid_d_};
  const double eta[2] = {p.eta_t[i], p.eta_d[i]};
  for (int j = 0; j < 2; ++j) {
    const MarginTerms& m = s.m[j];
    s.s1[j] = lj[j] * m.du;
    s.s2[j] = ljj[j] * m.du * m.du + lj[j] * m.ddu;
    s.a[j] = lja[j] * m.du;
    if (delta[j]) {
      s.value += density_value(m) + std::log((*dr[j])[grid[j]->event_index[i]]) + eta[j];
      s.s1[j] += density_d1(m);
      s.s2[j] += density_d2(m);
    }
  }
  s.s_td = ltd * s.m[0].du * s.m[1].du;
  s.l_a = la;
  s.l_aa = laa;
  s.l_ad = lda;
  s.l_td = ltd;
  return s;
}

Evaluation FullLikelihood::evaluate(const ThetaFull& th, Block block, int order) const {
  const Prepared prep = prepare(th);
  const Index n = data_.size();
  const Index p = data_.p();
  const Index q = n_alpha();
  const Index kt = grid_t_.size();
  const Index kd = grid_d_.size();
  const bool full = block == Block::Full;

  VectorXd ca(n), caa(n), cbt(n), cbtt(n), cbd(n), cbdd(n), crt(n), crd(n);
  VectorXd h_ab[2] = {VectorXd(n), VectorXd(n)}, h_ar[2] = {VectorXd(n), VectorXd(n)};
  VectorXd h_br[2] = {VectorXd(n), VectorXd(n)}, h_rr[2] = {VectorXd(n), VectorXd(n)};
  VectorXd x_bb(n), x_btrd(n), x_bdrt(n), x_rr(n);
  double value = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Subject s = subject(prep, i, std::nullopt);
    value += s.value;
    if (order < 1) continue;
    const double dt = data_.delta_t[i], dd = data_.delta_d[i];
    ca[i] = s.l_a * s.adot;
    cbt[i] = s.s1[0] * s.m[0].lambda + dt;
    cbd[i] = s.s1[1] * s.m[1].lambda + dd;
    crt[i] = s.s1[0] * s.m[0].e;
    crd[i] = s.s1[1] * s.m[1].e;
    if (order < 2) continue;
    caa[i] = s.l_aa * s.adot * s.adot + s.l_a * s.addot;
    for (int j = 0; j < 2; ++j) {
      const MarginTerms& m = s.m[j];
      h_ab[j][i] = s.a[j] * s.adot * m.lambda;
      h_ar[j][i] = s.a[j] * s.adot * m.e;
      h_br[j][i] = (s.s2[j] * m.lambda + s.s1[j]) * m.e;
      h_rr[j][i] = s.s2[j] * m.e * m.e;
    }
    cbtt[i] = (s.s2[0] * s.m[0].lambda + s.s1[0]) * s.m[0].lambda;
    cbdd[i] = (s.s2[1] * s.m[1].lambda + s.s1[1]) * s.m[1].lambda;
    x_bb[i] = s.s_td * s.m[0].lambda * s.m[1].lambda;
    x_btrd[i] = s.s_td * s.m[0].lambda * s.m[1].e;
    x_bdrt[i] = s.s_td * s.m[1].lambda * s.m[0].e;
    x_rr[i] = s.s_td * s.m[0].e * s.m[1].e;
  }
  Evaluation out;
  out.value = value / n;
  if (order < 1) return out;

  const Index d1 = q + p + kt;
  const Index dim = full ? d1 + p + kd : d1;
  const Index oa = 0, obt = q, ort = q + p, obd = d1, ord = d1 + p;
  const VectorXd& drt = th.theta1.t.dr;
  const VectorXd& drd = th.theta_d.dr;
  const VectorXd ev_t = grid_t_.events.cast<double>();
  const VectorXd ev_d = grid_d_.events.cast<double>();

  VectorXd& g = out.gradient;
  g.resize(dim);
  g.segment(oa, q) = w_.transpose() * ca;
  g.segment(obt, p) = data_.z.transpose() * cbt;
  g.segment(ort, kt) = suffix_scalar(grid_t_.count_le, crt, kt) + ev_t.cwiseQuotient(drt);
  if (full) {
    g.segment(obd, p) = data_.z.transpose() * cbd;
    g.segment(ord, kd) = suffix_scalar(grid_d_.count_le, crd, kd) + ev_d.cwiseQuotient(drd);
  }
  g /= n;
  if (order < 2) return out;

  const MatrixXd& z = data_.z;
  MatrixXd& h = out.hessian;
  h = MatrixXd::Zero(dim, dim);
  h.block(oa, oa, q, q) = w_.transpose() * caa.asDiagonal() * w_;
  h.block(oa, obt, q, p) = w_.transpose() * h_ab[0].asDiagonal() * z;
  h.block(oa, ort, q, kt) = suffix_rows(grid_t_.count_le, h_ar[0], w_, kt);
  h.block(obt, obt, p, p) = z.transpose() * cbtt.asDiagonal() * z;
  h.block(obt, ort, p, kt) = suffix_rows(grid_t_.count_le, h_br[0], z, kt);
  h.block(ort, ort, kt, kt) = suffix_square(grid_t_.count_le, h_rr[0], kt);
  h.block(ort, ort, kt, kt).diagonal() -= ev_t.cwiseQuotient(drt.cwiseProduct(drt));
  if (full) {
    h.block(oa, obd, q, p) = w_.transpose() * h_ab[1].asDiagonal() * z;
    h.block(oa, ord, q, kd) = suffix_rows(grid_d_.count_le, h_ar[1], w_, kd);
    h.block(obt, obd, p, p) = z.transpose() * x_bb.asDiagonal() * z;
    h.block(obt, ord, p, kd) = suffix_rows(grid_d_.count_le, x_btrd, z, kd);
    h.block(ort, obd, kt, p) = suffix_rows(grid_t_.count_le, x_bdrt, z, kt).transpose();
    h.block(ort, ord, kt, kd) = suffix_pair(grid_t_.count_le, grid_d_.count_le, x_rr, kt, kd);
    h.block(obd, obd, p, p) = z.transpose() * cbdd.asDiagonal() * z;
    h.block(obd, ord, p, kd) = suffix_rows(grid_d_.count_le, h_br[1], z, kd);
    h.block(ord, ord, kd, kd) = suffix_square(grid_d_.count_le, h_rr[1], kd);
    h.block(ord, ord, kd, kd).diagonal() -= ev_d.cwiseQuotient(drd.cwiseProduct(drd));
  }
  h.triangularView<Eigen::StrictlyLower>() = h.transpose();
  h /= n;
  return out;
}

double FullLikelihood::loglik(const ThetaFull& th) const { return evaluate(th, Block::Full, 0).value; }

Eigen::VectorXd FullLikelihood::score_theta1(const ThetaFull& th) const {
  return evaluate(th, Block::Theta1, 1).gradient * static_cast<double>(data_.size());
}

Eigen::VectorXd FullLikelihood::score_full(const ThetaFull& th) const {
  return evaluate(th, Block::Full, 1).gradient * static_cast<double>(data_.size());
}

Eigen::MatrixXd FullLikelihood::info_full(const ThetaFull& th) const { return -evaluate(th, Block::Full, 2).hessian; }

Eigen::MatrixXd FullLikelihood::info_theta1(const ThetaFull& th) const {
  return -evaluate(th, Block::Theta1, 2).hessian;
}

Eigen::MatrixXd FullLikelihood::subject_scores(const ThetaFull& th, Block block) const {
  const Prepared prep = prepare(th);
  const Index n = data_.size();
  const Index p = data_.p();
  const Index q = n_alpha();
  const Index kt = grid_t_.size();
  const Index d1 = q + p + kt;
  const bool full = block == Block::Full;
  MatrixXd out = MatrixXd::Zero(n, full ? d1 + p + grid_d_.size() : d1);
  for (Index i = 0; i < n; ++i) {
    const Subject s = subject(prep, i, std::nullopt);
    const double dt = data_.delta_t[i], dd = data_.delta_d[i];
    out.row(i).segment(0, q) = s.l_a * s.adot * w_.row(i);
    out.row(i).segment(q, p) = (s.s1[0] * s.m[0].lambda + dt) * data_.z.row(i);
    out.row(i).segment(q + p, grid_t_.count_le[i]).setConstant(s.s1[0] * s.m[0].e);
    if (dt) out(i, q + p + grid_t_.event_index[i]) += 1.0 / th.theta1.t.dr[grid_t_.event_index[i]];
    if (!full) continue;
    out.row(i).segment(d1, p) = (s.s1[1] * s.m[1].lambda + dd) * data_.z.row(i);
    out.row(i).segment(d1 + p, grid_d_.count_le[i]).setConstant(s.s1[1] * s.m[1].e);
    if (dd) out(i, d1 + p + grid_d_.event_index[i]) += 1.0 / th.theta_d.dr[grid_d_.event_index[i]];
  }
  return out;
}

Eigen::VectorXd FullLikelihood::subject_score_theta1(const ThetaFull& th, Index i, std::optional<double> u_d) const {
  const Prepared prep = prepare(th);
  const Subject s = subject(prep, i, u_d);
  const Index p = data_.p();
  const Index q = n_alpha();
  VectorXd out = VectorXd::Zero(dim_theta1());
  out.segment(0, q) = s.l_a * s.adot * w_.row(i).transpose();
  out.segment(q, p) = (s.s1[0] * s.m[0].lambda + data_.delta_t[i]) * data_.z.row(i).transpose();
  out.segment(q + p, grid_t_.count_le[i]).setConstant(s.s1[0] * s.m[0].e);
  if (data_.delta_t[i]) out[q + p + grid_t_.event_index[i]] += 1.0 / th.theta1.t.dr[grid_t_.event_index[i]];
  return out;
}

Eigen::MatrixXd FullLikelihood::cross_theta1_uD(const ThetaFull& th) const {
  const Prepared prep = prepare(th);
  const Index n = data_.size();
  const Index p = data_.p();
  const Index q = n_alpha();
  MatrixXd out = MatrixXd::Zero(n, dim_theta1());
  for (Index i = 0; i < n; ++i) {
    const Subject s = subject(prep, i, std::nullopt);
    const double c = s.l_td * s.m[0].du;
    out.row(i).segment(0, q) = s.l_ad * s.adot * w_.row(i);
    out.row(i).segment(q, p) = c * s.m[0].lambda * data_.z.row(i);
    out.row(i).segment(q + p, grid_t_.count_le[i]).setConstant(c * s.m[0].e);
  }
  return out;
}

Eigen::VectorXd FullLikelihood::cross_theta1_uD(const ThetaFull& th, Index i) const {
  return cross_theta1_uD(th).row(i).transpose();
}

Eigen::VectorXd FullLikelihood::u_t(const ThetaFull& th) const {
  const Prepared prep = prepare(th);
  VectorXd u(data_.size());
  for (Index i = 0; i < u.size(); ++i)
    u[i] = margin_terms(g_t_, prep.cum_t[grid_t_.count_le[i]], std::exp(prep.eta_t[i]), eps_t_).u;
  return u;
}

Eigen::VectorXd FullLikelihood::u_d(const ThetaFull& th) const {
  const Prepared prep = prepare(th);
  VectorXd u(data_.size());
  for (Index i = 0; i < u.size(); ++i)
    u[i] = margin_terms(g_d_, prep.cum_d[grid_d_.count_le[i]], std::exp(prep.eta_d[i]), eps_d_).u;
  return u;
}

}  // namespace semicomp
