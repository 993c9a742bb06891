#include "adaptdim/io.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "adaptdim/error.hpp"
#include "adaptdim/format.hpp"

namespace adaptdim::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0.0;
    if (!parse_number(cell, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_rows_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

Vector vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(std::string(what) + " must contain numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("unknown field '" + key + "' in " + where);
  }
}

dist::CoordinateLaw law_from(const json& j) {
  if (!j.is_object()) throw ValidationError("law must be an object");
  reject_unknown(j, {"kind", "offset"}, "law");
  dist::CoordinateLaw law;
  law.kind = dist::law_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("offset")) law.offset = j.at("offset").get<double>();
  return law;
}

json law_json(const dist::CoordinateLaw& law) {
  json j{{"kind", dist::to_string(law.kind)}};
  if (law.kind == dist::LawKind::gaussian_mixture_symmetric) j["offset"] = law.offset;
  return j;
}

}  // namespace

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CovarianceSpectrum read_spectrum_csv(std::istream& in) {
  std::string line;
  std::vector<double> values;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (first) {
      first = false;
      if (t == "eigenvalue") continue;
    }
    double v = 0.0;
    if (!parse_number(t, v)) throw ValidationError("spectrum CSV line " + std::to_string(line_no) + " is not a number");
    values.push_back(v);
  }
  return CovarianceSpectrum(std::move(values));
}

CovarianceSpectrum read_spectrum_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_spectrum_csv(in);
}

void write_spectrum_csv(std::ostream& out, const CovarianceSpectrum& spectrum) {
  out << "eigenvalue\n";
  for (double v : spectrum.eigenvalues()) out << format_double(v) << '\n';
}

SampleMatrix read_points_csv(std::istream& in) {
  std::string line;
  std::vector<std::vector<double>> rows;
  std::vector<double> row;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!parse_row(line, row)) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw ValidationError("points CSV line " + std::to_string(line_no) + " is not numeric");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ValidationError("points CSV has no rows");
  return SampleMatrix::from_rows(rows);
}

SampleMatrix read_points_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const SampleMatrix& points) {
  for (std::size_t i = 0; i < points.m(); ++i) {
    for (std::size_t j = 0; j < points.d(); ++j) {
      if (j) out << ',';
      out << format_double(points.rows()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

json to_json(const dist::DistributionSpec& spec) {
  json laws = json::array();
  for (const auto& law : spec.laws()) laws.push_back(law_json(law));
  json label{{"kind", dist::to_string(spec.label_model().kind)}};
  const auto& lm = spec.label_model();
  if (lm.kind == dist::LabelKind::halfspace || lm.kind == dist::LabelKind::halfspace_with_flip) {
    label["direction"] = vector_json(lm.direction);
  }
  if (lm.kind == dist::LabelKind::coin || lm.kind == dist::LabelKind::halfspace_with_flip) {
    label["probability"] = lm.probability;
  }
  json j{{"laws", laws}, {"variances", spec.variances()}, {"label_model", label}};
  if (spec.rotation()) j["rotation"] = matrix_rows_json(*spec.rotation());
  return j;
}

dist::DistributionSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("distribution must be a JSON object");
  reject_unknown(j, {"dimension", "laws", "variances", "rotation", "label_model"}, "distribution");
  std::optional<std::size_t> dimension;
  if (j.contains("dimension")) dimension = j.at("dimension").get<std::size_t>();

  std::vector<dist::CoordinateLaw> laws;
  const json& jl = j.at("laws");
  if (jl.is_array()) {
    for (const auto& item : jl) laws.push_back(law_from(item));
  } else {
    if (!dimension) throw ValidationError("a single law object needs `dimension`");
    laws.assign(*dimension, law_from(jl));
  }
  const std::size_t d = laws.size();
  if (dimension && *dimension != d) throw ValidationError("`dimension` disagrees with the number of laws");

  std::vector<double> variances;
  const json& jv = j.at("variances");
  if (jv.is_array()) {
    for (const auto& v : jv) variances.push_back(v.get<double>());
  } else if (jv.is_number()) {
    variances.assign(d, jv.get<double>());
  } else {
    throw ValidationError("variances must be an array or a number");
  }

  std::optional<Matrix> rotation;
  if (j.contains("rotation") && !j.at("rotation").is_null()) {
    const json& jr = j.at("rotation");
    if (!jr.is_array() || jr.size() != d) throw ValidationError("rotation must be a d x d array of rows");
    Matrix r(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
      const Vector row = vector_from(jr[i], "rotation row");
      if (static_cast<std::size_t>(row.size()) != d) throw ValidationError("rotation must be d x d");
      r.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    rotation = r;
  }

  const json& jm = j.at("label_model");
  if (!jm.is_object()) throw ValidationError("label_model must be an object");
  reject_unknown(jm, {"kind", "direction", "probability"}, "label_model");
  dist::LabelModel label;
  label.kind = dist::label_kind_from_string(jm.at("kind").get<std::string>());
  if (jm.contains("direction")) label.direction = vector_from(jm.at("direction"), "label direction");
  label.probability = jm.value("probability", label.kind == dist::LabelKind::coin ? 0.5 : 0.0);
  return dist::DistributionSpec(std::move(laws), std::move(variances), std::move(rotation), std::move(label));
}

json to_json(const optim::QpSolution& sol) {
  return json{{"w", vector_json(sol.w)},
              {"objective", sol.objective},
              {"active_set", sol.active_set},
              {"kkt_residual", sol.kkt_residual},
              {"status", optim::to_string(sol.status)}};
}

json to_json(const shatter::ShatterCertificate& cert) {
  json witnesses = nullptr;
  if (!cert.witnesses.empty()) {
    witnesses = json::object();
    for (const auto& [key, w] : cert.witnesses) witnesses[key] = vector_json(w);
  }
  return json{{"shattered", cert.shattered},
              {"gamma", cert.gamma},
              {"worst_labeling", cert.worst_labeling},
              {"worst_value", json_number(cert.worst_value)},
              {"gram_condition", cert.gram_condition},
              {"witnesses", witnesses}};
}

json to_json(const shatter::FatShatteringEstimate& est) {
  return json{{"lower", est.lower}, {"upper", est.upper}, {"witness_subset", est.witness_subset}, {"gamma", est.gamma}};
}

json to_json(const spectral::AdaptedDimResult& res) {
  return json{{"k", res.k}, {"gamma", res.gamma}, {"tail_sum", res.tail_sum}};
}

json to_json(const spectral::LimitCertificate& cert) {
  return json{{"b", cert.b}, {"k", cert.k}, {"subspace_basis", matrix_rows_json(cert.subspace_basis)}};
}

}  // namespace adaptdim::io
