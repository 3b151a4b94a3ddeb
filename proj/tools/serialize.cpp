#include "serialize.hpp"

#include <cstdio>
#include <sstream>

namespace mkepler::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) fail("expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) fail(std::string("missing field \"") + name + "\"");
  return *it;
}

int int_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) fail(std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) fail(std::string(what) + " must be a number");
  return v.get<double>();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double conic_column(const Eigen::VectorXd& r, const OrbitElements* el) {
  if (el == nullptr) return 0.0;
  const auto res = conic_residuals(r, *el);
  return std::max(std::abs(res.scalar), res.wedge);
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const Multivectord& x) {
  const Metric& m = x.metric();
  Json terms = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double c = x.coeffs()(i);
    if (c == 0.0) continue;
    Json idx = Json::array();
    const BladeMask blade = x.blade(i);
    for (int p = 0; p < m.ambient(); ++p)
      if (blade & (BladeMask{1} << p)) idx.push_back(m.label(p));
    terms.push_back(Json{{"idx", idx}, {"c", c}});
  }
  return Json{{"metric", m.is_lorentz() ? "lorentz" : "euclidean"}, {"dim", m.dim}, {"grade", x.grade()},
              {"terms", terms}};
}

Multivectord multivector_from_json(const Json& j) {
  const Json& kind = field(j, "metric");
  if (!kind.is_string()) fail("metric must be a string");
  const int dim = int_field(j, "dim");
  const int grade = int_field(j, "grade");
  if (dim < 2 || dim > 24) fail("dimension out of range");
  if (kind != "euclidean" && kind != "lorentz") fail("metric must be \"euclidean\" or \"lorentz\"");
  const Metric metric = kind == "euclidean" ? Metric::euclidean(dim) : Metric::lorentz(dim);
  if (grade < 0 || grade > metric.ambient()) fail("grade out of range");
  Multivectord out(metric, grade);
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) fail("terms must be an array");
  for (const Json& t : terms) {
    const Json& idx = field(t, "idx");
    if (!idx.is_array() || static_cast<int>(idx.size()) != grade) fail("term index list must have length grade");
    BladeMask blade = 0;
    int previous = -1;
    for (const Json& label : idx) {
      if (!label.is_number_integer()) fail("term indices must be integers");
      const int p = metric.position(label.get<int>());
      if (p < 0 || p >= metric.ambient()) fail("term index out of range");
      if (p <= previous) fail("term indices must be strictly increasing");
      previous = p;
      blade |= BladeMask{1} << p;
    }
    out[blade] += number(field(t, "c"), "term coefficient");
  }
  return out;
}

Json to_json(const SkewMatrixd& s) {
  Json upper = Json::array();
  for (int i = 0; i < s.size(); ++i)
    for (int j = i + 1; j < s.size(); ++j)
      if (s(i, j) != 0.0) upper.push_back(Json::array({i + 1, j + 1, s(i, j)}));
  return Json{{"k", s.k()}, {"upper", upper}};
}

SkewMatrixd skew_from_json(const Json& j) {
  const int k = int_field(j, "k");
  if (k < 1 || k > 12) fail("k out of range");
  SkewMatrixd out(k);
  const Json& upper = field(j, "upper");
  if (!upper.is_array()) fail("upper must be an array");
  for (const Json& e : upper) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer())
      fail("upper entries are [i, j, value]");
    const int a = e[0].get<int>();
    const int b = e[1].get<int>();
    if (a < 1 || b > 2 * k || a >= b) fail("upper entries need 1 <= i < j <= 2k");
    out.set(a - 1, b - 1, number(e[2], "skew entry"));
  }
  return out;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) fail("expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(j[i], "vector entry");
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail("expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::VectorXd row = vector_from_json(j[static_cast<std::size_t>(i)]);
    if (i == 0) out.resize(rows, row.size());
    if (row.size() != out.cols()) fail("matrix rows have different lengths");
    out.row(i) = row.transpose();
  }
  return out;
}

Json to_json(const State& s) {
  return Json{{"k", s.k()}, {"r", to_json(s.r)}, {"v", to_json(s.v)}, {"xi", to_json(s.xi)}};
}

State state_from_json(const Json& j) {
  State s{vector_from_json(field(j, "r")), vector_from_json(field(j, "v")), skew_from_json(field(j, "xi"))};
  if (j.contains("k") && int_field(j, "k") != s.k()) fail("k disagrees with the charge");
  try {
    s.validate();
  } catch (const DomainError& e) {
    fail(e.what());
  }
  return s;
}

Json to_json(const OrbitElements& el) {
  return Json{{"k", el.k}, {"A", to_json(el.A)}, {"Lbar", to_json(el.Lbar)}};
}

OrbitElements elements_from_json(const Json& j) {
  OrbitElements el{int_field(j, "k"), vector_from_json(field(j, "A")), multivector_from_json(field(j, "Lbar"))};
  if (el.k < 1 || el.A.size() != 2 * el.k + 1) fail("A must have 2k+1 components");
  if (el.Lbar.grade() != 2 || el.Lbar.metric() != Metric::euclidean(2 * el.k + 1))
    fail("Lbar must be a Euclidean 2-vector in dimension 2k+1");
  return el;
}

Json to_json(const InitialData& data) {
  return Json{{"q", to_json(data.q)},
              {"v", to_json(data.v)},
              {"eta", to_json(data.eta)},
              {"rotation", to_json(data.rotation)},
              {"implied_mu", data.implied_mu}};
}

Json to_json(const LightConeOrbit& lc) { return Json{{"k", lc.k}, {"a", to_json(lc.a)}, {"m", to_json(lc.m)}}; }

LightConeOrbit lightcone_from_json(const Json& j) {
  LightConeOrbit lc;
  lc.a = vector_from_json(field(j, "a"));
  lc.m = multivector_from_json(field(j, "m"));
  if (lc.a.size() < 4 || lc.a.size() % 2 != 0) fail("a must have 2k+2 components");
  lc.k = static_cast<int>(lc.a.size() / 2 - 1);
  if (j.contains("k") && int_field(j, "k") != lc.k) fail("k disagrees with a");
  if (lc.m.grade() != 3 || lc.m.metric() != Metric::lorentz(2 * lc.k + 1))
    fail("m must be a Lorentz 3-vector matching a");
  return lc;
}

Json to_json(const LorentzTransform& t) {
  return Json{{"matrix", to_json(t.matrix)}, {"proper", t.proper()}, {"orthochronous", t.orthochronous()}};
}

LorentzTransform transform_from_json(const Json& j) {
  LorentzTransform t{matrix_from_json(j.is_object() ? field(j, "matrix") : j)};
  if (t.matrix.rows() != t.matrix.cols()) fail("Lorentz matrix must be square");
  return t;
}

Json to_json(const InvariantRecord& rec) {
  Json out{{"k", rec.k}, {"mu", rec.mu}, {"E", rec.E}, {"L", to_json(rec.L)}, {"A", to_json(rec.A)}};
  out["V"] = rec.V ? to_json(*rec.V) : Json(nullptr);
  out["Lbar"] = rec.Lbar ? to_json(*rec.Lbar) : Json(nullptr);
  out["rv_normsq"] = rec.rv_normsq;
  return out;
}

Json to_json(const DriftReport& d) {
  return Json{{"E", d.E}, {"L", d.L}, {"A", d.A}, {"V", d.V}, {"Lbar", d.Lbar}, {"xi_orbit", d.xi_orbit},
              {"max", d.max()}};
}

Json to_json(const ConicFit& fit) {
  return Json{{"e", fit.e},
              {"plane", to_json(fit.plane)},
              {"centroid", to_json(fit.centroid)},
              {"residual", fit.residual},
              {"planarity", fit.planarity}};
}

Json trajectory_json(const Trajectory& traj, const OrbitElements* elements) {
  Json samples = Json::array();
  for (const auto& smp : traj.samples) {
    Json s{{"t", smp.t}, {"r", to_json(smp.state.r)}, {"v", to_json(smp.state.v)}, {"xi", to_json(smp.state.xi)}};
    const InvariantRecord rec = smp.invariants ? *smp.invariants : compute_invariants(smp.state, traj.mu);
    s["invariants"] = to_json(rec);
    s["L_normsq"] = square(rec.L);
    s["Lbar_normsq"] = rec.Lbar ? Json(square(*rec.Lbar)) : Json(nullptr);
    s["conic_residual"] = elements ? Json(conic_column(smp.state.r, elements)) : Json(nullptr);
    samples.push_back(std::move(s));
  }
  return Json{{"k", traj.k},
              {"mu", traj.mu},
              {"rel_tol", traj.rel_tol},
              {"abs_tol", traj.abs_tol},
              {"stats",
               {{"accepted", traj.stats.accepted}, {"rejected", traj.stats.rejected},
                {"evaluations", traj.stats.evaluations}}},
              {"perihelion_times", traj.perihelion_times},
              {"samples", samples}};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const OrbitElements* elements) {
  const int n = 2 * traj.k + 1;
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",r" << i;
  for (int i = 1; i <= n; ++i) out << ",v" << i;
  for (int i = 1; i <= 2 * traj.k; ++i)
    for (int j = i + 1; j <= 2 * traj.k; ++j) out << ",xi_" << i << "_" << j;
  out << ",E";
  for (int i = 1; i <= n; ++i) out << ",A" << i;
  out << ",L_normsq,Lbar_normsq,conic_residual\n";
  for (const auto& smp : traj.samples) {
    const InvariantRecord rec = smp.invariants ? *smp.invariants : compute_invariants(smp.state, traj.mu);
    out << format_double(smp.t);
    for (int i = 0; i < n; ++i) out << ',' << format_double(smp.state.r(i));
    for (int i = 0; i < n; ++i) out << ',' << format_double(smp.state.v(i));
    for (Eigen::Index i = 0; i < smp.state.xi.upper().size(); ++i) out << ',' << format_double(smp.state.xi.upper()(i));
    out << ',' << format_double(rec.E);
    for (int i = 0; i < n; ++i) out << ',' << format_double(rec.A(i));
    out << ',' << format_double(square(rec.L)) << ',';
    if (rec.Lbar) out << format_double(square(*rec.Lbar));
    out << ',';
    if (elements) out << format_double(conic_column(smp.state.r, elements));
    out << '\n';
  }
}

std::vector<Eigen::VectorXd> read_trajectory_positions(const std::string& text) {
  std::vector<Eigen::VectorXd> out;
  const auto start = text.find_first_not_of(" \t\r\n");
  if (start == std::string::npos) fail("empty trajectory file");
  if (text[start] == '{') {
    const Json j = parse(text);
    const Json& samples = field(j, "samples");
    if (!samples.is_array()) fail("samples must be an array");
    for (const Json& s : samples) out.push_back(vector_from_json(field(s, "r")));
    return out;
  }
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) header.push_back(cell);
  }
  std::vector<std::size_t> columns;
  for (int i = 1;; ++i) {
    const auto it = std::find(header.begin(), header.end(), "r" + std::to_string(i));
    if (it == header.end()) break;
    columns.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  if (columns.empty()) fail("CSV header has no position columns");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    Eigen::VectorXd r(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] >= cells.size()) fail("CSV row is too short");
      try {
        r(static_cast<Eigen::Index>(i)) = std::stod(cells[columns[i]]);
      } catch (const std::exception&) {
        fail("CSV cell is not a number");
      }
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace mkepler::io
