#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "geometria/errors.hpp"
#include "geometria/relations.hpp"
#include "geometria/rng.hpp"
#include "oracles.hpp"

using namespace geometria;
using namespace geometria::relations;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("jsd basics") {
  const auto p = vec({0.5, 0.5});
  CHECK(jsd(p, p) == doctest::Approx(0.0).epsilon(1e-15));
  // Disjoint supports saturate base-2 JSD at exactly 1.
  CHECK(jsd(vec({1.0, 0.0}), vec({0.0, 1.0})) == 1.0);
  // Frozen from the entropy-form oracle.
  const double expected = 0.3112781244591328;
  CHECK(jsd(vec({0.5, 0.5}), vec({1.0, 0.0})) ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK(oracles::jsd_entropy_form(vec({0.5, 0.5}), vec({1.0, 0.0})) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("jsd matches the entropy-form oracle on random pairs") {
  Rng rng(91);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 2 + int(uniform_below(rng, 12));
    const auto p = oracles::random_probability_vector(rng, dim);
    const auto q = oracles::random_probability_vector(rng, dim);
    const double direct = jsd(p, q);
    CHECK(direct ==
          doctest::Approx(oracles::jsd_entropy_form(p, q)).epsilon(1e-12));
    CHECK(direct >= 0.0);
    CHECK(direct <= 1.0);
    CHECK(jsd(p, q) == jsd(q, p));
  }
}

TEST_CASE("sqrt(jsd) satisfies the triangle inequality") {
  Rng rng(92);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 2 + int(uniform_below(rng, 6));
    const auto p = oracles::random_probability_vector(rng, dim);
    const auto q = oracles::random_probability_vector(rng, dim);
    const auto r = oracles::random_probability_vector(rng, dim);
    const double pq = std::sqrt(jsd(p, q));
    const double qr = std::sqrt(jsd(q, r));
    const double pr = std::sqrt(jsd(p, r));
    CHECK(pq + qr - pr >= -1e-12);
  }
}

TEST_CASE("jsd zero iff equal within tolerance") {
  Rng rng(93);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = oracles::random_probability_vector(rng, 5);
    CHECK(jsd(p, p) <= 1e-14);
    auto q = p;
    q[0] = std::min(1.0, q[0] + 0.01);
    q /= q.sum();
    CHECK(jsd(p, q) > 0.0);
  }
}

TEST_CASE("jsd input validation") {
  CHECK_THROWS_AS(jsd(vec({1.0, 0.0}), vec({1.0, 0.0, 0.0})), Error);
  CHECK_THROWS_AS(jsd(vec({0.7, 0.7}), vec({0.5, 0.5})), Error);
  CHECK_THROWS_AS(jsd(vec({1.5, -0.5}), vec({0.5, 0.5})), Error);
}

TEST_CASE("cosine distance") {
  CHECK(cosine_distance(vec({1.0, 2.0}), vec({1.0, 2.0})) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cosine_distance(vec({1.0, 0.0}), vec({0.0, 1.0})) ==
        doctest::Approx(1.0));
  CHECK(cosine_distance(vec({1.0, 1.0}), vec({1.0, 0.0})) ==
        doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(cosine_distance(vec({0.0, 0.0}), vec({1.0, 0.0})), Error);
}

TEST_CASE("hellinger and euclidean") {
  CHECK(hellinger(vec({0.3, 0.7}), vec({0.3, 0.7})) == 0.0);
  CHECK(hellinger(vec({1.0, 0.0}), vec({0.0, 1.0})) == doctest::Approx(1.0));
  CHECK(euclidean(vec({1.0, 2.0}), vec({1.0, 2.0})) == 0.0);
  CHECK(euclidean(vec({0.0, 0.0}), vec({3.0, 4.0})) == doctest::Approx(5.0));
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("same", "same") == 0);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("kitten", "sitting") ==
        oracles::edit_distance_recursive("kitten", "sitting"));

  Rng rng(94);
  const std::string alphabet = "abcd";
  for (int trial = 0; trial < 60; ++trial) {
    std::string a, b;
    const auto la = uniform_below(rng, 9);
    const auto lb = uniform_below(rng, 9);
    for (std::uint64_t i = 0; i < la; ++i)
      a.push_back(alphabet[uniform_below(rng, alphabet.size())]);
    for (std::uint64_t i = 0; i < lb; ++i)
      b.push_back(alphabet[uniform_below(rng, alphabet.size())]);
    CHECK(edit_distance(a, b) == oracles::edit_distance_recursive(a, b));
  }
}

TEST_CASE("declared measure contracts hold on random inputs") {
  Rng rng(95);
  for (const auto& id : measure_ids()) {
    const auto& d = measure_by_id(id);
    for (int trial = 0; trial < 50; ++trial) {
      const int dim = 2 + int(uniform_below(rng, 6));
      Eigen::VectorXd u, v;
      if (d.domain == MeasureDomain::ProbabilityVectors) {
        u = oracles::random_probability_vector(rng, dim);
        v = oracles::random_probability_vector(rng, dim);
      } else {
        u.resize(dim);
        v.resize(dim);
        for (int i = 0; i < dim; ++i) {
          u[i] = u01(rng) * 4.0 - 2.0;
          v[i] = u01(rng) * 4.0 - 2.0;
        }
        if (u.norm() == 0.0) u[0] = 1.0;
        if (v.norm() == 0.0) v[0] = 1.0;
      }
      const double fwd = d.fn(u, v);
      if (d.symmetric)
        CHECK(fwd == doctest::Approx(d.fn(v, u)).epsilon(1e-12));
      if (d.bounds) {
        CHECK(fwd >= d.bounds->first - 1e-12);
        CHECK(fwd <= d.bounds->second + 1e-12);
      }
    }
  }
}

TEST_CASE("structural_map basics") {
  Representation rep;
  rep.symbol_ids = {"a", "b"};
  rep.rows.resize(2, 2);

  SUBCASE("identical rows give a zero matrix") {
    rep.rows << 0.5, 0.5, 0.5, 0.5;
    const auto s = structural_map(rep, "jsd2");
    CHECK(s.matrix.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.measure_id == "jsd2");
  }
  SUBCASE("disjoint supports saturate") {
    rep.rows << 1.0, 0.0, 0.0, 1.0;
    const auto s = structural_map(rep, "jsd2");
    CHECK(s.matrix(0, 1) == 1.0);
    CHECK(s.matrix(1, 0) == 1.0);
    CHECK(s.matrix(0, 0) == 0.0);
  }
  SUBCASE("derived value") {
    rep.rows << 0.5, 0.5, 1.0, 0.0;
    const auto s = structural_map(rep, "jsd2");
    CHECK(s.matrix(0, 1) ==
          doctest::Approx(0.3112781244591328).epsilon(1e-13));
  }
  SUBCASE("domain violations are rejected") {
    rep.rows << 0.9, 0.3, 0.5, 0.5;
    CHECK_THROWS_AS(structural_map(rep, "jsd2"), Error);
  }
}

TEST_CASE("structural_map chains provenance and stays pure") {
  Representation rep;
  rep.symbol_ids = {"x", "y", "z"};
  rep.rows.resize(3, 2);
  rep.rows << 0.2, 0.8, 0.5, 0.5, 0.9, 0.1;
  rep.provenance.add("corpus.source", "test");

  const auto s1 = structural_map(rep, "jsd2");
  const auto s2 = structural_map(rep, "jsd2");
  CHECK(s1.matrix == s2.matrix);
  CHECK(s1.phi_digest() == s2.phi_digest());
  CHECK(s1.provenance.find("corpus.source").value() == "test");
  CHECK(s1.provenance.find("measure.d").value() == "jsd2");
  CHECK(s1.phi_digest() != rep.provenance.digest());
}

TEST_CASE("structural_map is permutation-equivariant") {
  Rng rng(96);
  Representation rep;
  rep.symbol_ids = {"s0", "s1", "s2", "s3"};
  rep.rows.resize(4, 3);
  for (int i = 0; i < 4; ++i)
    rep.rows.row(i) = oracles::random_probability_vector(rng, 3).transpose();

  Representation permuted;
  const std::vector<int> perm = {2, 0, 3, 1};
  permuted.rows.resize(4, 3);
  for (int i = 0; i < 4; ++i) {
    permuted.symbol_ids.push_back(rep.symbol_ids[size_t(perm[size_t(i)])]);
    permuted.rows.row(i) = rep.rows.row(perm[size_t(i)]);
  }

  const auto s = structural_map(rep, "jsd2");
  const auto sp = structural_map(permuted, "jsd2");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(sp.matrix(i, j) == s.matrix(perm[size_t(i)], perm[size_t(j)]));
}

TEST_CASE("edit_structure over raw texts") {
  const auto s = edit_structure({"a", "b", "c"}, {"kitten", "sitting", ""});
  CHECK(s.matrix(0, 1) == 3.0);
  CHECK(s.matrix(1, 0) == 3.0);
  CHECK(s.matrix(0, 2) == 6.0);
  CHECK(s.matrix.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random_structure") {
  const std::vector<std::string> ids = {"a", "b", "c", "d"};
  const auto s = random_structure(ids, RandomKind::Symmetric, 7);
  CHECK(s.matrix == s.matrix.transpose().eval());
  CHECK(s.matrix.diagonal().cwiseAbs().maxCoeff() == 0.0);
  const auto again = random_structure(ids, RandomKind::Symmetric, 7);
  CHECK(s.matrix == again.matrix);
  const auto other = random_structure(ids, RandomKind::Symmetric, 8);
  CHECK(s.matrix != other.matrix);

  const auto full = random_structure(ids, RandomKind::Full, 7);
  CHECK(full.matrix != full.matrix.transpose().eval());
  CHECK(full.matrix.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random_structure entries are uniform in the mean") {
  std::vector<std::string> ids;
  for (int i = 0; i < 1000; ++i) ids.push_back("s" + std::to_string(i));
  const auto s = random_structure(ids, RandomKind::Symmetric, 123);
  const double n = double(ids.size());
  const double mean = s.matrix.sum() / (n * n - n);
  CHECK(mean > 0.49);
  CHECK(mean < 0.51);
}

TEST_CASE("null_structure") {
  const auto s = null_structure({"a", "b", "c"}, 1.0);
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  CHECK(s.matrix == expected);
  CHECK_THROWS_AS(null_structure({"a", "b"}, 0.0), Error);
  CHECK_THROWS_AS(null_structure({"a", "b"}, -1.0), Error);
}

TEST_CASE("structure files round-trip bit-exactly") {
  Rng rng(97);
  Representation rep;
  rep.symbol_ids = {"alpha", "beta", "gamma"};
  rep.rows.resize(3, 4);
  for (int i = 0; i < 3; ++i)
    rep.rows.row(i) = oracles::random_probability_vector(rng, 4).transpose();
  rep.provenance.add("corpus.source", "roundtrip");
  const auto s = structural_map(rep, "jsd2");

  const std::string path = "test_structure_roundtrip.tmp";
  save_structure(s, path);
  const auto loaded = load_structure(path);
  CHECK(loaded.matrix == s.matrix);
  CHECK(loaded.symbol_ids == s.symbol_ids);
  CHECK(loaded.measure_id == s.measure_id);
  CHECK(loaded.phi_digest() == s.phi_digest());
  std::remove(path.c_str());
  std::remove((path + ".prov").c_str());
}
