#include "rdec/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rdec/error.hpp"

namespace rdec::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

Eigen::Index parse_order(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(path, "expected a positive integer");
  const auto n = j.get<long long>();
  if (n < 1 || n > 64) fail(path, "order must lie in [1, 64]");
  return static_cast<Eigen::Index>(n);
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

}  // namespace

RealMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  bool complex = false;
  RealMatrix re, im;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) fail(rp, "expected a non-empty array of entries");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      re = RealMatrix::Zero(rows, cols);
      im = RealMatrix::Zero(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      fail(rp, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      if (e.is_number()) {
        re(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        re(r, c) = e[0].get<double>();
        im(r, c) = e[1].get<double>();
        complex = true;
      } else {
        fail(ep, "expected a number or a [re, im] pair");
      }
      if (!std::isfinite(re(r, c)) || !std::isfinite(im(r, c))) fail(ep, "entry is not finite");
    }
  }
  if (rows != cols) fail(path, "matrix is " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected square");
  return complex ? mat::realify(re, im) : re;
}

SystemPtr parse_system(const json& j, const std::string& path) {
  const auto& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) fail(path + ".kind", "expected a string");
  const auto kind = kind_j.get<std::string>();
  auto order = [&] { return parse_order(field(j, "n", path), path + ".n"); };
  try {
    if (kind == "full_real") return opsys::full_real(order());
    if (kind == "ell_inf") return opsys::ell_inf(order());
    if (kind == "complex_full") return opsys::complex_full(order());
    if (kind == "quaternion") {
      if (j.contains("n") && parse_order(j["n"], path + ".n") != 4) fail(path + ".n", "quaternion system has n = 4");
      return opsys::quaternion();
    }
    if (kind == "span") {
      const Eigen::Index n = order();
      const auto& bj = field(j, "basis", path);
      if (!bj.is_array() || bj.empty()) fail(path + ".basis", "expected a non-empty array of matrices");
      std::vector<RealMatrix> basis;
      for (std::size_t a = 0; a < bj.size(); ++a) {
        const std::string bp = path + ".basis[" + std::to_string(a) + "]";
        RealMatrix b = parse_matrix(bj[a], bp);
        if (b.rows() != n) fail(bp, "matrix is " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                        ", expected " + std::to_string(n) + "x" + std::to_string(n));
        basis.push_back(std::move(b));
      }
      std::string label = "span";
      if (j.contains("label")) {
        if (!j["label"].is_string()) fail(path + ".label", "expected a string");
        label = j["label"].get<std::string>();
      }
      return opsys::span(n, std::move(basis), label);
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    fail(path, msg);
  } catch (const ShapeError& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown kind '" + kind + "' (expected full_real, ell_inf, quaternion, complex_full or span)");
}

LinearMap parse_map_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("document: malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) fail("document", "expected an object");
  const auto domain = parse_system(field(doc, "domain", "document"), "domain");
  const auto codomain = parse_system(field(doc, "codomain", "document"), "codomain");
  const auto& ij = field(doc, "images", "document");
  if (!ij.is_array()) fail("images", "expected an array of matrices");
  if (ij.size() != domain->dim()) {
    fail("images", "has " + std::to_string(ij.size()) + " entries, domain '" + domain->label() + "' has dimension " +
                       std::to_string(domain->dim()));
  }
  std::vector<RealMatrix> images;
  for (std::size_t a = 0; a < ij.size(); ++a) {
    const std::string ip = "images[" + std::to_string(a) + "]";
    RealMatrix img = parse_matrix(ij[a], ip);
    if (img.rows() != codomain->ambient()) {
      fail(ip, "matrix is " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) + ", codomain ambient is " +
                   std::to_string(codomain->ambient()));
    }
    if (!codomain->is_full() && !codomain->contains(img, 1e-10)) fail(ip, "image is not in the codomain span");
    images.push_back(std::move(img));
  }
  return LinearMap(domain, codomain, std::move(images));
}

LinearMap read_map_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map_document(ss.str());
}

json matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_matrix_to_json(const RealMatrix& realified) {
  const Eigen::Index n = realified.rows() / 2;
  json rows = json::array();
  for (Eigen::Index r = 0; r < n; ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < n; ++c) row.push_back(json::array({realified(r, c), realified(n + r, c)}));
    rows.push_back(std::move(row));
  }
  return rows;
}

json system_to_json(const SystemPtr& v) {
  json j;
  switch (v->kind()) {
    case opsys::SystemKind::full_real:
    case opsys::SystemKind::ell_inf:
    case opsys::SystemKind::complex_full:
      if (v->order() > 0) {
        j["kind"] = opsys::to_string(v->kind());
        j["n"] = v->order();
        return j;
      }
      break;
    case opsys::SystemKind::quaternion:
      j["kind"] = "quaternion";
      j["n"] = 4;
      return j;
    default:
      break;
  }
  j["kind"] = "span";
  j["n"] = v->ambient();
  j["label"] = v->label();
  j["basis"] = json::array();
  for (const auto& b : v->basis()) j["basis"].push_back(matrix_to_json(b));
  return j;
}

json map_to_json(const LinearMap& u) {
  json j;
  j["domain"] = system_to_json(u.domain());
  j["codomain"] = system_to_json(u.codomain());
  const bool complex = u.codomain()->kind() == opsys::SystemKind::complex_full;
  j["images"] = json::array();
  for (const auto& img : u.images()) j["images"].push_back(complex ? complex_matrix_to_json(img) : matrix_to_json(img));
  return j;
}

std::string serialize_map_document(const LinearMap& u) { return map_to_json(u).dump(2); }

json matrix_to_report(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(round12(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rdec::io
