#include "geometria/relations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "geometria/errors.hpp"
#include "geometria/rng.hpp"

namespace geometria::relations {

namespace {

constexpr double kProbabilityTolerance = 1e-6;

void check_probability(const Eigen::VectorXd& p, const char* name) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0))
      fail(Errc::InvalidDistribution,
           std::string(name) + " has a negative or non-finite entry");
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance)
    fail(Errc::InvalidDistribution,
         std::string(name) + " sums to " + format_full(sum) + ", not 1");
}

}  // namespace

double jsd(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    fail(Errc::LengthMismatch, "jsd inputs have different lengths");
  check_probability(p, "p");
  check_probability(q, "q");
  // JSD = 1/2 KL(p||m) + 1/2 KL(q||m), m = (p+q)/2, log base 2.
  // m_i = 0 only when p_i = q_i = 0, and those terms contribute 0.
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) total += p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) total += q[i] * std::log2(q[i] / m);
  }
  return 0.5 * total;
}

double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size())
    fail(Errc::LengthMismatch, "cosine inputs have different lengths");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0)
    fail(Errc::ZeroVector, "cosine distance is undefined for a zero vector");
  return 1.0 - u.dot(v) / (nu * nv);
}

double hellinger(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    fail(Errc::LengthMismatch, "hellinger inputs have different lengths");
  check_probability(p, "p");
  check_probability(q, "q");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    sum += d * d;
  }
  return std::sqrt(0.5 * sum);
}

double euclidean(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size())
    fail(Errc::LengthMismatch, "euclidean inputs have different lengths");
  return (u - v).norm();
}

std::uint64_t edit_distance(const std::string& a, const std::string& b) {
  const std::size_t la = a.size(), lb = b.size();
  std::vector<std::uint64_t> prev(lb + 1), cur(lb + 1);
  for (std::size_t j = 0; j <= lb; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= la; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= lb; ++j) {
      const std::uint64_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[lb];
}

namespace {

const std::map<std::string, RelationMeasure>& measure_registry() {
  static const std::map<std::string, RelationMeasure> registry = [] {
    std::map<std::string, RelationMeasure> r;
    r["jsd2"] = {"jsd2", MeasureKind::Dissimilarity, true,
                 MeasureDomain::ProbabilityVectors,
                 std::make_pair(0.0, 1.0), &jsd};
    r["cosine"] = {"cosine", MeasureKind::Dissimilarity, true,
                   MeasureDomain::RealVectors,
                   std::make_pair(0.0, 2.0), &cosine_distance};
    r["hellinger"] = {"hellinger", MeasureKind::Dissimilarity, true,
                      MeasureDomain::ProbabilityVectors,
                      std::make_pair(0.0, 1.0), &hellinger};
    r["euclidean"] = {"euclidean", MeasureKind::Dissimilarity, true,
                      MeasureDomain::RealVectors, std::nullopt, &euclidean};
    return r;
  }();
  return registry;
}

}  // namespace

const RelationMeasure& measure_by_id(const std::string& id) {
  const auto& registry = measure_registry();
  auto it = registry.find(id);
  if (it == registry.end())
    fail(Errc::UnknownMeasure, "no relation measure '" + id + "'");
  return it->second;
}

std::vector<std::string> measure_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, m] : measure_registry()) ids.push_back(id);
  return ids;
}

void Representation::validate() const {
  if (rows.rows() != static_cast<Eigen::Index>(symbol_ids.size()))
    fail(Errc::SymbolMismatch, "row count does not match symbol_ids");
  if (!rows.allFinite())
    fail(Errc::InvalidParameter, "representation has non-finite entries");
}

void Structure::validate() const {
  if (matrix.rows() != matrix.cols() ||
      matrix.rows() != static_cast<Eigen::Index>(symbol_ids.size()))
    fail(Errc::SymbolMismatch, "structure matrix shape mismatch");
  if (!matrix.allFinite())
    fail(Errc::InvalidParameter, "structure has non-finite entries");
}

Structure structural_map(const Representation& rep, const RelationMeasure& d) {
  rep.validate();
  const auto n = static_cast<Eigen::Index>(rep.symbol_ids.size());
  if (n < 2) fail(Errc::TooFewSymbols, "structural_map needs |S| >= 2");

  if (d.domain == MeasureDomain::Strings)
    fail(Errc::DomainViolation,
         "string measures do not apply to vector representations");
  if (d.domain == MeasureDomain::ProbabilityVectors) {
    for (Eigen::Index i = 0; i < n; ++i)
      check_probability(rep.rows.row(i).transpose(),
                        ("row " + std::to_string(i)).c_str());
  }

  Structure s;
  s.symbol_ids = rep.symbol_ids;
  s.measure_id = d.id;
  s.matrix.resize(n, n);
  // The full matrix is computed even for symmetric d; a triangle-only
  // shortcut must not change file contents, so it is not taken here.
  const double self_relation = d.kind == MeasureKind::Dissimilarity ? 0.0 : 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    s.matrix(i, i) = self_relation;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      s.matrix(i, j) = d.fn(rep.rows.row(i).transpose(),
                            rep.rows.row(j).transpose());
    }
  }
  s.provenance = rep.provenance;
  s.provenance.add("measure.d", d.id);
  return s;
}

Structure structural_map(const Representation& rep,
                         const std::string& measure_id) {
  return structural_map(rep, measure_by_id(measure_id));
}

Structure edit_structure(const std::vector<std::string>& ids,
                         const std::vector<std::string>& texts) {
  if (ids.size() != texts.size())
    fail(Errc::LengthMismatch, "ids and texts differ in length");
  const auto n = static_cast<Eigen::Index>(ids.size());
  if (n < 2) fail(Errc::TooFewSymbols, "edit_structure needs |S| >= 2");
  Structure s;
  s.symbol_ids = ids;
  s.measure_id = "edit";
  s.matrix.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto dist = static_cast<double>(
          edit_distance(texts[static_cast<std::size_t>(i)],
                        texts[static_cast<std::size_t>(j)]));
      s.matrix(i, j) = dist;
      s.matrix(j, i) = dist;
    }
  }
  s.provenance.add("measure.d", "edit");
  return s;
}

Structure random_structure(const std::vector<std::string>& symbol_ids,
                           RandomKind kind, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(symbol_ids.size());
  if (n < 2) fail(Errc::TooFewSymbols, "random_structure needs |S| >= 2");
  Rng rng(seed);
  Structure s;
  s.symbol_ids = symbol_ids;
  s.measure_id = "random";
  s.matrix.setZero(n, n);
  if (kind == RandomKind::Symmetric) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        s.matrix(i, j) = s.matrix(j, i) = u01(rng);
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s.matrix(i, j) = u01(rng);
  }
  s.provenance.add("measure.d", "random");
  s.provenance.add("random.kind",
                   kind == RandomKind::Symmetric ? "symmetric" : "full");
  s.provenance.add("random.seed",
                   std::int64_t(static_cast<std::int64_t>(seed)));
  return s;
}

Structure null_structure(const std::vector<std::string>& symbol_ids,
                         double c) {
  if (!(c > 0.0)) fail(Errc::InvalidParameter, "null structure needs c > 0");
  const auto n = static_cast<Eigen::Index>(symbol_ids.size());
  if (n < 2) fail(Errc::TooFewSymbols, "null_structure needs |S| >= 2");
  Structure s;
  s.symbol_ids = symbol_ids;
  s.measure_id = "null";
  s.matrix = Eigen::MatrixXd::Constant(n, n, c);
  s.matrix.diagonal().setZero();
  s.provenance.add("measure.d", "null");
  s.provenance.add("null.c", c);
  return s;
}

void save_structure(const Structure& s, const std::string& path) {
  s.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write '" + path + "'");
  const auto n = s.matrix.rows();
  out << "STRUCT1 " << n << ' ' << s.measure_id << ' ' << s.phi_digest()
      << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << format_full(s.matrix(i, j));
    }
    out << '\n';
  }
  for (const auto& id : s.symbol_ids) out << id << '\n';
  if (!out) fail(Errc::IoError, "short write to '" + path + "'");

  std::ofstream prov(path + ".prov", std::ios::binary);
  if (!prov) fail(Errc::IoError, "cannot write '" + path + ".prov'");
  prov << s.provenance.canonical_text();
}

Structure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UnreadablePath, "cannot open '" + path + "'");
  std::string magic, measure_id, digest;
  Eigen::Index n = 0;
  if (!(in >> magic >> n >> measure_id >> digest) || magic != "STRUCT1")
    fail(Errc::MalformedRecord, path + ": bad STRUCT1 header");
  if (n < 2) fail(Errc::MalformedRecord, path + ": n < 2");
  Structure s;
  s.measure_id = measure_id;
  s.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(in >> s.matrix(i, j)))
        fail(Errc::MalformedRecord, path + ": truncated matrix");
  std::string line;
  std::getline(in, line);  // consume end of the last matrix row
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      fail(Errc::MalformedRecord, path + ": missing symbol ids");
    s.symbol_ids.push_back(line);
  }

  std::ifstream prov(path + ".prov");
  if (prov) {
    while (std::getline(prov, line)) {
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(Errc::StoreCorruption, path + ".prov: bad line '" + line + "'");
      s.provenance.add(line.substr(0, eq), line.substr(eq + 1));
    }
    if (s.provenance.digest() != digest)
      fail(Errc::StoreCorruption,
           path + ": provenance digest does not match header");
  }
  s.validate();
  return s;
}

}  // namespace geometria::relations
