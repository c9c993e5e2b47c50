#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace oracles {

using geometria::Rng;
using geometria::u01;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Eigen::MatrixXd standardize_points(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  out.rowwise() -= out.colwise().mean();
  const double norm = out.norm();
  if (norm <= 0.0) throw std::runtime_error("degenerate configuration");
  return out / norm;
}

namespace {

double trace_against(const Eigen::MatrixXd& q, const Eigen::MatrixXd& m) {
  return (q.array() * m.array()).sum();  // tr(Q^T M)
}

// Exact coordinate ascent over single Givens angles: for plane (i, j) the
// objective is A cos(theta) + B sin(theta) + const, maximized analytically.
double givens_ascent(Eigen::MatrixXd q, const Eigen::MatrixXd& m) {
  const auto n = q.rows();
  double current = trace_against(q, m);
  for (int sweep = 0; sweep < 500; ++sweep) {
    const double before = current;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double a = q.row(i).dot(m.row(i)) + q.row(j).dot(m.row(j));
        const double b = q.row(i).dot(m.row(j)) - q.row(j).dot(m.row(i));
        const double best = std::sqrt(a * a + b * b);
        if (best <= 0.0) continue;
        const double c = a / best, s = b / best;
        const Eigen::RowVectorXd row_i = q.row(i);
        q.row(i) = c * row_i - s * q.row(j);
        q.row(j) = s * row_i + c * q.row(j).eval();
        current = current - a + best;  // A cos + B sin at the optimum
      }
    }
    current = trace_against(q, m);  // re-evaluate to shed rounding drift
    if (current - before < 1e-14) break;
  }
  return current;
}

Eigen::Matrix3d euler_rotation(double alpha, double beta, double gamma) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  Eigen::Matrix3d rz1, ry, rz2;
  rz1 << ca, -sa, 0, sa, ca, 0, 0, 0, 1;
  ry << cb, 0, sb, 0, 1, 0, -sb, 0, cb;
  rz2 << cg, -sg, 0, sg, cg, 0, 0, 0, 1;
  return rz1 * ry * rz2;
}

double best_trace_3(const Eigen::MatrixXd& m) {
  const double two_pi = 2.0 * kPi;
  double best = -1e300;
  Eigen::MatrixXd best_q;
  for (int reflect = 0; reflect < 2; ++reflect) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    if (reflect) flip(2, 2) = -1.0;
    for (int ia = 0; ia < 36; ++ia) {
      for (int ib = 0; ib <= 18; ++ib) {
        for (int ig = 0; ig < 36; ++ig) {
          const Eigen::Matrix3d q =
              euler_rotation(two_pi * ia / 36.0, kPi * ib / 18.0,
                             two_pi * ig / 36.0) *
              flip;
          const double t = trace_against(q, m);
          if (t > best) {
            best = t;
            best_q = q;
          }
        }
      }
    }
  }
  return givens_ascent(best_q, m);
}

double best_trace_4(const Eigen::MatrixXd& m) {
  // Coarse grid over six Givens angles, then ascent from the best points.
  constexpr int kSteps = 6;
  std::array<double, kSteps> cs, sn;
  for (int i = 0; i < kSteps; ++i) {
    const double theta = 2.0 * kPi * i / kSteps;
    cs[i] = std::cos(theta);
    sn[i] = std::sin(theta);
  }
  static const int planes[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                   {1, 2}, {1, 3}, {2, 3}};
  auto apply = [&](Eigen::Matrix4d& q, int plane, int step) {
    const int i = planes[plane][0], j = planes[plane][1];
    const Eigen::RowVector4d row_i = q.row(i);
    q.row(i) = cs[step] * row_i - sn[step] * q.row(j);
    q.row(j) = sn[step] * row_i + cs[step] * q.row(j).eval();
  };

  double best_direct = -1e300;
  Eigen::Matrix4d best_q = Eigen::Matrix4d::Identity();
  for (int reflect = 0; reflect < 2; ++reflect) {
    Eigen::Matrix4d flip = Eigen::Matrix4d::Identity();
    if (reflect) flip(3, 3) = -1.0;
    int idx[6];
    for (idx[0] = 0; idx[0] < kSteps; ++idx[0])
      for (idx[1] = 0; idx[1] < kSteps; ++idx[1])
        for (idx[2] = 0; idx[2] < kSteps; ++idx[2])
          for (idx[3] = 0; idx[3] < kSteps; ++idx[3])
            for (idx[4] = 0; idx[4] < kSteps; ++idx[4])
              for (idx[5] = 0; idx[5] < kSteps; ++idx[5]) {
                Eigen::Matrix4d q = flip;
                for (int p = 0; p < 6; ++p) apply(q, p, idx[p]);
                const double t = trace_against(q, m);
                if (t > best_direct) {
                  best_direct = t;
                  best_q = q;
                }
              }
  }
  // Ascent from the winning grid point, both pure starts, and a spread of
  // seeded orthogonal starts per determinant branch. The ascent never
  // overshoots the true maximum, so taking the max only adds reliability.
  double best = givens_ascent(best_q, m);
  Eigen::Matrix4d flip = Eigen::Matrix4d::Identity();
  best = std::max(best, givens_ascent(flip, m));
  flip(3, 3) = -1.0;
  best = std::max(best, givens_ascent(flip, m));
  Rng rng(20240601);
  for (int start = 0; start < 8; ++start) {
    Eigen::MatrixXd q = random_orthogonal(rng, 4);
    best = std::max(best, givens_ascent(q, m));
    q.col(3) = -q.col(3);
    best = std::max(best, givens_ascent(q, m));
  }
  return best;
}

}  // namespace

double procrustes_disparity_bruteforce(const Eigen::MatrixXd& a,
                                       const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd pa = standardize_points(a);
  const Eigen::MatrixXd pb = standardize_points(b);
  const Eigen::MatrixXd m = pa.transpose() * pb;
  double trace = 0.0;
  if (m.rows() == 3) trace = best_trace_3(m);
  else if (m.rows() == 4) trace = best_trace_4(m);
  else throw std::runtime_error("oracle supports n in {3, 4}");
  return std::clamp(1.0 - trace * trace, 0.0, 1.0);
}

double jsd_entropy_form(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  auto entropy = [](const Eigen::VectorXd& v) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] > 0.0) h -= v[i] * std::log2(v[i]);
    return h;
  };
  const Eigen::VectorXd m = 0.5 * (p + q);
  return entropy(m) - 0.5 * entropy(p) - 0.5 * entropy(q);
}

std::uint64_t edit_distance_recursive(const std::string& a,
                                      const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> memo;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::uint64_t {
    if (i == 0) return j;
    if (j == 0) return i;
    const auto key = std::make_pair(i, j);
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
    const std::uint64_t sub =
        self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
    const std::uint64_t del = self(self, i - 1, j) + 1;
    const std::uint64_t ins = self(self, i, j - 1) + 1;
    return memo[key] = std::min({sub, del, ins});
  };
  return rec(rec, a.size(), b.size());
}

double spearman_rank_oracle(const std::vector<double>& x,
                            const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double smaller = 0.0, ties = 0.0;
      for (const double other : v) {
        if (other < v[i]) smaller += 1.0;
        if (other == v[i]) ties += 1.0;
      }
      r[i] = smaller + 0.5 * (ties + 1.0);
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const auto n = double(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
    sxy += (rx[i] - mx) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Eigen::VectorXd random_probability_vector(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  double sum = 0.0;
  for (int i = 0; i < dim; ++i) {
    v[i] = -std::log(1.0 - u01(rng));  // flat Dirichlet via exponentials
    sum += v[i];
  }
  return v / sum;
}

Eigen::MatrixXd random_symmetric_structure(Rng& rng, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = u01(rng);
  return m;
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = geometria::standard_normal(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

}  // namespace oracles
