#include "jgl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jgl/errors.hpp"

namespace jgl::io {

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return in;
}

double read_number(std::istream& in, const fs::path& path) {
  std::string token;
  if (!(in >> token))
    throw InputError("'" + path.string() + "': unexpected end of file");
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    if (!std::isfinite(v)) throw InputError("'" + path.string() + "': non-finite value");
    return v;
  } catch (const std::logic_error&) {
    throw InputError("'" + path.string() + "': malformed number '" + token + "'");
  }
}

Index read_count(std::istream& in, const fs::path& path) {
  long long v;
  if (!(in >> v) || v <= 0)
    throw InputError("'" + path.string() + "': expected a positive count");
  return static_cast<Index>(v);
}

void expect_end(std::istream& in, const fs::path& path) {
  std::string extra;
  if (in >> extra) throw InputError("'" + path.string() + "': trailing data");
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

SymMatrix read_matrix(const fs::path& path) {
  std::ifstream in = open_in(path);
  const Index p = read_count(in, path);
  Eigen::MatrixXd a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = read_number(in, path);
  expect_end(in, path);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputError("'" + path.string() + "': matrix is not symmetric");
  return SymMatrix::from_dense(a);
}

std::string format_matrix(const SymMatrix& m) {
  std::string out = std::to_string(m.dim()) + "\n";
  for (Index i = 0; i < m.dim(); ++i) {
    for (Index j = 0; j < m.dim(); ++j) {
      if (j) out += ' ';
      append_number(out, m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix(const fs::path& path, const SymMatrix& m) {
  write_text(path, format_matrix(m));
}

SampleMatrix read_samples(const fs::path& path) {
  std::ifstream in = open_in(path);
  const Index n = read_count(in, path);
  const Index p = read_count(in, path);
  Eigen::MatrixXd x(n, p);
  for (Index t = 0; t < n; ++t)
    for (Index i = 0; i < p; ++i) x(t, i) = read_number(in, path);
  expect_end(in, path);
  return SampleMatrix(std::move(x));
}

void write_samples(const fs::path& path, const SampleMatrix& x) {
  std::string out = std::to_string(x.n()) + " " + std::to_string(x.p()) + "\n";
  for (Index t = 0; t < x.n(); ++t) {
    for (Index i = 0; i < x.p(); ++i) {
      if (i) out += ' ';
      append_number(out, x.rows()(t, i));
    }
    out += '\n';
  }
  write_text(path, out);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const Json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

Json read_json(const fs::path& path) {
  std::ifstream in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("'" + path.string() + "': " + e.what());
  }
}

Json to_json(const Partition& part) {
  return Json{{"components", part.components()},
              {"complexity", complexity_estimate(part)},
              {"count", part.size()}};
}

Json to_json(const PartitionFamily& family) {
  Json classes = Json::array();
  for (Index k = 0; k < family.size(); ++k) {
    Json entry = to_json(family[k]);
    entry["class"] = k;
    classes.push_back(std::move(entry));
  }
  return classes;
}

PartitionFamily family_from_json(const Json& doc, Index p) {
  const Json* classes = &doc;
  if (doc.is_object()) {
    if (!doc.contains("classes")) throw InputError("partition document has no 'classes'");
    classes = &doc.at("classes");
  }
  if (!classes->is_array() || classes->empty())
    throw InputError("partition document: 'classes' must be a non-empty array");
  PartitionFamily family;
  try {
    for (const Json& entry : *classes) {
      const Json& comps = entry.is_object() ? entry.at("components") : entry;
      family.push_back(
          Partition::from_components(p, comps.get<std::vector<IndexList>>()));
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("partition document: ") + e.what());
  }
  return family;
}

Json to_json(const DatagenConfig& cfg) {
  return Json{{"type", to_string(cfg.type)},
              {"p", cfg.p},
              {"K", cfg.classes},
              {"r", cfg.r},
              {"samples_per_class", cfg.sample_count()},
              {"seed", cfg.seed},
              {"block_size_range", {cfg.block_min, cfg.block_max}},
              {"perturbation", cfg.perturbation},
              {"block_density", cfg.block_density},
              {"type_a_zero_fraction", cfg.type_a_zero_fraction}};
}

Json to_json(const GroundTruth& truth, const DatagenConfig& cfg) {
  Json doc{{"config", to_json(cfg)}, {"seed", truth.seed}};
  doc["block_structure"] =
      truth.block_structure.empty() ? Json(nullptr) : to_json(truth.block_structure);
  doc["base_structure"] =
      truth.base_structure ? to_json(*truth.base_structure) : Json(nullptr);
  return doc;
}

Json to_json(const SolveReport& report) {
  return Json{{"iterations", report.iterations},
              {"converged", report.converged},
              {"primal_residual", report.primal_residual},
              {"dual_residual", report.dual_residual},
              {"final_objective", report.final_objective},
              {"objective_trace", report.objective_trace},
              {"block_complexities", report.block_complexities},
              {"wall_times",
               {{"theta_step", report.wall_times.theta_step},
                {"y_step", report.wall_times.y_step},
                {"u_step", report.wall_times.u_step},
                {"total", report.wall_times.total}}}};
}

Json to_json(const ConditionReport& report) {
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    violations.push_back(Json{{"clause", to_string(v.clause)},
                              {"class", v.k ? Json(*v.k) : Json(nullptr)},
                              {"i", v.i},
                              {"j", v.j},
                              {"lhs", v.lhs},
                              {"rhs", v.rhs},
                              {"slack", v.rhs - v.lhs}});
  }
  return Json{{"satisfied", report.satisfied},
              {"pairs_checked", report.pairs_checked},
              {"min_slack", report.min_slack ? Json(*report.min_slack) : Json(nullptr)},
              {"violations", std::move(violations)}};
}

}  // namespace jgl::io
