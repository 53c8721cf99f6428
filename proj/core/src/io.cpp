#include "csf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace csf {

namespace {

using Json = nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

// ---- canonical writer ----------------------------------------------------

void dump_canonical(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.cbegin(); it != j.cend(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        dump_canonical(item, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += format_float(j.get<double>());
      break;
    case Json::value_t::string:
    case Json::value_t::boolean:
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
    case Json::value_t::null:
      out += j.dump();
      break;
    default:
      throw Error(ErrorCode::InvalidArgument, "unserializable JSON value");
  }
}

Json complex_to_json(Complex z) {
  return Json::array({z.real(), z.imag()});
}

Json element_to_json(const AlgebraElement& a) {
  Json blocks = Json::array();
  for (int k = 0; k < a.spec().block_count(); ++k) {
    const Matrix& m = a.block(k);
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        row.push_back(complex_to_json(m(r, c)));
      }
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return blocks;
}

Json operator_to_json_tree(const ModuleOperator& op) {
  Json rows = Json::array();
  for (int i = 0; i < op.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < op.cols(); ++j) {
      row.push_back(element_to_json(op.entry(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json_tree(const ModuleVector& v) {
  Json entries = Json::array();
  for (int i = 0; i < v.length(); ++i) {
    entries.push_back(element_to_json(v.entry(i)));
  }
  return entries;
}

// ---- strict readers --------------------------------------------------------

const Json& require_key(const Json& obj, const char* key,
                        const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where + ": missing key \"" + key + "\"");
  return *it;
}

int read_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    bad(where + ": expected an integer");
  }
  return j.get<int>();
}

double read_number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  return j.get<double>();
}

Complex read_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    bad(where + ": expected an [re, im] pair");
  }
  return Complex(read_number(j[0], where + "[0]"),
                 read_number(j[1], where + "[1]"));
}

AlgebraElement read_element(const Json& j, const AlgebraSpec& spec,
                            const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.block_count()) {
    bad(where + ": expected " + std::to_string(spec.block_count()) +
        " blocks");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(j.size());
  for (int k = 0; k < spec.block_count(); ++k) {
    const int n = spec.block_dim(k);
    const Json& rows = j[static_cast<std::size_t>(k)];
    const std::string bwhere = where + "[" + std::to_string(k) + "]";
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      bad(bwhere + ": expected " + std::to_string(n) + " rows");
    }
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      const std::string rwhere = bwhere + "[" + std::to_string(r) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        bad(rwhere + ": expected " + std::to_string(n) + " entries");
      }
      for (int c = 0; c < n; ++c) {
        m(r, c) = read_complex(row[static_cast<std::size_t>(c)],
                               rwhere + "[" + std::to_string(c) + "]");
      }
    }
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(spec, std::move(blocks));
}

ModuleOperator read_operator(const Json& j, const AlgebraSpec& spec,
                             int expected_rows, int expected_cols,
                             const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected_rows) {
    bad(where + ": expected " + std::to_string(expected_rows) + " rows");
  }
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<std::size_t>(expected_rows) *
                  static_cast<std::size_t>(expected_cols));
  for (int i = 0; i < expected_rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rwhere = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != expected_cols) {
      bad(rwhere + ": expected " + std::to_string(expected_cols) +
          " entries");
    }
    for (int c = 0; c < expected_cols; ++c) {
      entries.push_back(read_element(row[static_cast<std::size_t>(c)], spec,
                                     rwhere + "[" + std::to_string(c) + "]"));
    }
  }
  return ModuleOperator(spec, expected_rows, expected_cols,
                        std::move(entries));
}

ModuleVector read_vector(const Json& j, const AlgebraSpec& spec,
                         int expected_length, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected_length) {
    bad(where + ": expected " + std::to_string(expected_length) +
        " entries");
  }
  std::vector<AlgebraElement> entries;
  entries.reserve(j.size());
  for (int i = 0; i < expected_length; ++i) {
    entries.push_back(read_element(j[static_cast<std::size_t>(i)], spec,
                                   where + "[" + std::to_string(i) + "]"));
  }
  return ModuleVector(spec, std::move(entries));
}

}  // namespace

std::string format_float(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument,
                "non-finite value cannot be serialized");
  }
  if (x == 0.0) x = 0.0;  // fold -0.0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string operator_to_json(const ModuleOperator& op) {
  std::string out;
  dump_canonical(operator_to_json_tree(op), out);
  return out;
}

FrameFile to_frame_file(const OperatorFrame& f,
                        std::map<std::string, std::string> metadata) {
  if (!f.domain_is_ambient()) {
    throw Error(ErrorCode::InvalidArgument,
                "frames restricted to a submodule domain have no file form");
  }
  FrameFile file;
  file.algebra = f.spec().block_dims();
  file.ambient_rank = f.ambient_rank();
  file.kind = FrameKind::operator_frame;
  if (!f.codomain_is_ambient()) {
    file.codomain_projection = f.codomain_projection();
  }
  file.operator_elements = f.elements();
  file.metadata = std::move(metadata);
  return file;
}

FrameFile to_frame_file(const VectorFrame& vf,
                        std::map<std::string, std::string> metadata) {
  FrameFile file;
  file.algebra = vf.spec().block_dims();
  file.ambient_rank = vf.ambient_rank();
  file.kind = FrameKind::vector_frame;
  file.vector_elements = vf.vectors();
  file.metadata = std::move(metadata);
  return file;
}

OperatorFrame to_operator_frame(const FrameFile& file, const Tolerance& tol) {
  if (file.kind != FrameKind::operator_frame) {
    throw Error(ErrorCode::InvalidArgument,
                "file holds a vector frame, not an operator frame");
  }
  return OperatorFrame(file.operator_elements, file.codomain_projection, {},
                       tol);
}

VectorFrame to_vector_frame(const FrameFile& file) {
  if (file.kind != FrameKind::vector_frame) {
    throw Error(ErrorCode::InvalidArgument,
                "file holds an operator frame, not a vector frame");
  }
  return VectorFrame{file.vector_elements};
}

std::string serialize(const FrameFile& file) {
  Json root = Json::object();
  root["version"] = file.version;
  Json dims = Json::array();
  for (int d : file.algebra) dims.push_back(d);
  root["algebra"] = std::move(dims);
  root["ambient_rank"] = file.ambient_rank;
  root["kind"] = file.kind == FrameKind::vector_frame ? "vector_frame"
                                                      : "operator_frame";
  if (file.codomain_projection) {
    root["codomain_projection"] =
        operator_to_json_tree(*file.codomain_projection);
  }
  Json elements = Json::array();
  if (file.kind == FrameKind::vector_frame) {
    for (const auto& v : file.vector_elements) {
      elements.push_back(vector_to_json_tree(v));
    }
  } else {
    for (const auto& a : file.operator_elements) {
      elements.push_back(operator_to_json_tree(a));
    }
  }
  root["elements"] = std::move(elements);
  Json meta = Json::object();
  for (const auto& [key, value] : file.metadata) meta[key] = value;
  root["metadata"] = std::move(meta);

  std::string out;
  dump_canonical(root, out);
  out += '\n';
  return out;
}

FrameFile parse_frame_file(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(e.what());
  }
  if (!root.is_object()) bad("top level: expected an object");

  static const char* known[] = {"version",  "algebra",
                                "ambient_rank", "kind",
                                "codomain_projection", "elements",
                                "metadata"};
  for (auto it = root.cbegin(); it != root.cend(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) bad("top level: unexpected key \"" + it.key() + "\"");
  }

  FrameFile file;
  file.version = read_int(require_key(root, "version", "top level"),
                          "version");
  if (file.version != 1) {
    bad("version: unsupported value " + std::to_string(file.version));
  }

  const Json& dims = require_key(root, "algebra", "top level");
  if (!dims.is_array() || dims.empty()) {
    bad("algebra: expected a non-empty array of block dimensions");
  }
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const int d = read_int(dims[k], "algebra[" + std::to_string(k) + "]");
    if (d < 1) bad("algebra[" + std::to_string(k) + "]: dimension must be positive");
    file.algebra.push_back(d);
  }
  const AlgebraSpec spec(file.algebra);

  file.ambient_rank =
      read_int(require_key(root, "ambient_rank", "top level"),
               "ambient_rank");
  if (file.ambient_rank < 1) bad("ambient_rank: must be positive");

  const Json& kind = require_key(root, "kind", "top level");
  if (!kind.is_string()) bad("kind: expected a string");
  const std::string kind_name = kind.get<std::string>();
  if (kind_name == "vector_frame") {
    file.kind = FrameKind::vector_frame;
  } else if (kind_name == "operator_frame") {
    file.kind = FrameKind::operator_frame;
  } else {
    bad("kind: expected \"vector_frame\" or \"operator_frame\", got \"" +
        kind_name + "\"");
  }

  if (auto it = root.find("codomain_projection"); it != root.end()) {
    if (file.kind != FrameKind::operator_frame) {
      bad("codomain_projection: only operator frames carry one");
    }
    file.codomain_projection =
        read_operator(*it, spec, file.ambient_rank, file.ambient_rank,
                      "codomain_projection");
  }

  const Json& elements = require_key(root, "elements", "top level");
  if (!elements.is_array()) bad("elements: expected an array");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string where = "elements[" + std::to_string(i) + "]";
    if (file.kind == FrameKind::vector_frame) {
      file.vector_elements.push_back(
          read_vector(elements[i], spec, file.ambient_rank, where));
    } else {
      file.operator_elements.push_back(
          read_operator(elements[i], spec, file.ambient_rank,
                        file.ambient_rank, where));
    }
  }

  const Json& meta = require_key(root, "metadata", "top level");
  if (!meta.is_object()) bad("metadata: expected an object");
  for (auto it = meta.cbegin(); it != meta.cend(); ++it) {
    if (!it.value().is_string()) {
      bad("metadata." + it.key() + ": expected a string value");
    }
    file.metadata[it.key()] = it.value().get<std::string>();
  }

  return file;
}

FrameFile load_frame_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_frame_file(buf.str());
}

void save_frame_file(const FrameFile& file, const std::string& path) {
  const std::string text = serialize(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  }
  out << text;
  if (!out) {
    throw Error(ErrorCode::ParseError, "failed writing " + path);
  }
}

}  // namespace csf
