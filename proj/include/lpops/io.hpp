// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpops/harness.hpp"
#include "lpops/operator.hpp"
#include "lpops/quantities.hpp"

namespace lpops {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// Raised on malformed operator files; `field` names the offending entry.
class OperatorFileError : public std::runtime_error {
 public:
  OperatorFileError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct OperatorFile {
  Operator op;
  std::string label;
};

inline OperatorFile parse_operator(const Json& j) {
  if (!j.is_object()) throw OperatorFileError("<root>", "expected a JSON object");
  for (const char* key : {"dim", "p", "matrix"}) {
    if (!j.contains(key)) throw OperatorFileError(key, "missing");
  }
  if (!j["dim"].is_number_integer()) throw OperatorFileError("dim", "expected an integer");
  const long long dim = j["dim"].get<long long>();
  if (dim < 1 || dim > 4096) throw OperatorFileError("dim", "must be in [1, 4096], got " + std::to_string(dim));
  if (!j["p"].is_number()) throw OperatorFileError("p", "expected a number");
  const double p = j["p"].get<double>();
  if (!std::isfinite(p) || p <= 1.0) {
    throw OperatorFileError("p", "must satisfy 1 < p < inf, got " + j["p"].dump());
  }
  const Json& rows = j["matrix"];
  if (!rows.is_array()) throw OperatorFileError("matrix", "expected an array of rows");
  const auto n = static_cast<Eigen::Index>(dim);
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    throw OperatorFileError("matrix", "has " + std::to_string(rows.size()) + " rows, dim is " +
                                          std::to_string(dim));
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::string rname = "matrix[" + std::to_string(r) + "]";
    const Json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw OperatorFileError(rname, "expected an array");
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw OperatorFileError(rname, "has " + std::to_string(row.size()) +
                                         " entries, matrix must be square (" +
                                         std::to_string(dim) + "x" + std::to_string(dim) + ")");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::string ename = rname + "[" + std::to_string(c) + "]";
      const Json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw OperatorFileError(ename, "expected a [re, im] pair of numbers");
      }
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw OperatorFileError(ename, "not finite");
      m(r, c) = Complex(re, im);
    }
  }
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw OperatorFileError("label", "expected a string");
    label = j["label"].get<std::string>();
  }
  return {Operator(SpaceSpec(static_cast<int>(dim), p), std::move(m)), std::move(label)};
}

inline OperatorFile parse_operator_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw OperatorFileError("<json>", e.what());
  }
  return parse_operator(j);
}

inline OperatorFile load_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OperatorFileError("<file>", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_operator_text(ss.str());
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_json(const ComplexVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v[i]));
  return a;
}

inline Json to_json(const OperatorFile& f) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < f.op.matrix.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < f.op.matrix.cols(); ++c) row.push_back(complex_json(f.op.matrix(r, c)));
    rows.push_back(row);
  }
  Json j{{"dim", f.op.dim()}, {"p", f.op.space.p()}, {"matrix", rows}};
  if (!f.label.empty()) j["label"] = f.label;
  return j;
}

inline Json to_json(const ToleranceConfig& t) {
  return {{"tol_identity", t.tol_identity}, {"tol_class", t.tol_class}, {"tol_quantity", t.tol_quantity}};
}

inline Json to_json(const OptimizerConfig& o) {
  return {{"starts", o.starts},   {"max_iters", o.max_iters}, {"fd_step", o.fd_step},
          {"conv_tol", o.conv_tol}, {"seed", o.seed},          {"pool_factor", o.pool_factor}};
}

inline Json to_json(const QuantityValue& q) {
  Json j{{"kind", to_string(q.kind)},
         {"value", q.value},
         {"witness", vector_json(q.witness.coords)},
         {"witness_value", complex_json(q.witness_value)},
         {"method", to_string(q.method)},
         {"evaluations", q.evaluations}};
  j["reference"] = q.reference ? Json(*q.reference) : Json(nullptr);
  return j;
}

inline Json to_json(const StrongNormalWitness& w) {
  Json root = Json::array();
  for (Eigen::Index r = 0; r < w.root.rows(); ++r) root.push_back(vector_json(w.root.row(r).transpose()));
  return {{"root", root},
          {"square_residual", w.square_residual},
          {"root_self_adjoint_residual", w.root_self_adjoint_residual},
          {"tolerance", w.tolerance},
          {"verdict", w.verdict}};
}

inline Json to_json(const ClassificationReport& r) {
  Json j{{"residuals",
          {{"self_adjoint", r.residual_self_adjoint},
           {"hermitian", r.residual_hermitian},
           {"positive", r.residual_positive},
           {"normal", r.residual_normal},
           {"unitary", r.residual_unitary}}},
         {"verdicts",
          {{"self_adjoint", r.self_adjoint},
           {"hermitian", r.hermitian},
           {"positive", r.positive},
           {"normal", r.normal},
           {"unitary", r.unitary}}},
         {"tolerance", r.tolerance},
         {"norm_estimate", r.norm_estimate}};
  j["strongly_normal"] = r.strong_normal ? to_json(*r.strong_normal) : Json(nullptr);
  return j;
}

inline Json to_json(const SpectrumReport& s) {
  Json pairs = Json::array();
  for (const auto& e : s.pairs) {
    pairs.push_back({{"value", complex_json(e.value)},
                     {"vector", vector_json(e.vector.coords)},
                     {"residual", e.residual}});
  }
  return {{"pairs", pairs},
          {"spectral_radius", s.spectral_radius},
          {"dist_zero", s.dist_zero},
          {"defective", s.defective},
          {"max_residual", s.max_residual}};
}

inline Json to_json(const CheckReport& c) {
  return {{"id", c.id},
          {"instance", c.instance},
          {"seed", c.seed},
          {"left", c.left},
          {"right", c.right},
          {"abs_deviation", c.abs_deviation},
          {"rel_deviation", c.rel_deviation},
          {"metric", c.metric},
          {"tolerance", c.tolerance},
          {"status", to_string(c.status)},
          {"expected_failure", c.expected_failure},
          {"note", c.note}};
}

inline Json to_json(const SuiteReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  Json obs = Json::array();
  for (const auto& o : r.observations) {
    obs.push_back({{"id", o.id}, {"instance", o.instance}, {"value", o.value}, {"note", o.note}});
  }
  Json only = Json::array();
  for (const auto& id : r.config.only) only.push_back(id);
  return {{"summary",
           {{"total", r.total},
            {"passed", r.passed},
            {"failed", r.failed},
            {"skipped", r.skipped},
            {"expected_failures", r.expected_failures}}},
          {"config",
           {{"dims", r.config.dims},
            {"ps", r.config.ps},
            {"count", r.config.count},
            {"max_power", r.config.max_power},
            {"only", only},
            {"counterexamples", r.config.counterexamples},
            {"counterexamples_only", r.config.counterexamples_only}}},
          {"checks", checks},
          {"observations", obs}};
}

/// Envelope shared by every command. `timestamp` is the only field that
/// differs between identical runs.
inline Json report_file(const std::vector<std::string>& command, std::uint64_t seed,
                        const ToleranceConfig& tol, const OptimizerConfig& opt, Json results,
                        std::string timestamp) {
  return {{"tool", "lpops"},
          {"version", kVersion},
          {"command", command},
          {"seed", seed},
          {"tolerances", to_json(tol)},
          {"optimizer", to_json(opt)},
          {"results", std::move(results)},
          {"timestamp", std::move(timestamp)}};
}

inline std::string numerical_range_csv(const NumericalRangeSample& s) {
  std::ostringstream os;
  os.precision(17);
  os << "re,im\n";
  for (const auto& z : s.points) os << z.real() << ',' << z.imag() << '\n';
  return os.str();
}

}  // namespace lpops
