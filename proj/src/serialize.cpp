#include "quartsolve/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace quartsolve {

namespace {

void put_matrix_rows(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? " " : "") << format_number(m(i, j));
    }
    out << "\n";
  }
}

void put_vector(std::ostream& out, const char* tag, const Vector& v) {
  out << tag << " " << v.size() << "\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << (i ? " " : "") << format_number(v(i));
  }
  out << "\n";
}

std::string next_token(std::istream& in, const char* expected_what) {
  std::string tok;
  if (!(in >> tok)) {
    std::ostringstream os;
    os << "instance text ended early, expected " << expected_what;
    throw IoError(os.str());
  }
  return tok;
}

long next_count(std::istream& in, const char* what) {
  const std::string tok = next_token(in, what);
  try {
    size_t used = 0;
    const long value = std::stol(tok, &used);
    if (used != tok.size() || value < 0) {
      throw std::invalid_argument(tok);
    }
    return value;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "bad count for " << what << ": '" << tok << "'";
    throw IoError(os.str());
  }
}

double next_entry(std::istream& in, const char* what) {
  const std::string tok = next_token(in, what);
  try {
    size_t used = 0;
    const double value = std::stod(tok, &used);
    if (used != tok.size()) {
      throw std::invalid_argument(tok);
    }
    return value;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "bad numeric entry in " << what << ": '" << tok << "'";
    throw IoError(os.str());
  }
}

void expect_token(std::istream& in, const char* literal) {
  const std::string tok = next_token(in, literal);
  if (tok != literal) {
    std::ostringstream os;
    os << "expected '" << literal << "', found '" << tok << "'";
    throw IoError(os.str());
  }
}

Matrix read_matrix(std::istream& in, long rows, long cols, const char* what) {
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      m(i, j) = next_entry(in, what);
    }
  }
  return m;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_instance(std::ostream& out, const InstanceText& inst) {
  if (inst.kind != "sos" && inst.kind != "gram") {
    throw IoError("save_instance: kind must be 'sos' or 'gram'");
  }
  int dim = 0;
  int max_cols = 0;
  for (const auto& f : inst.factors) {
    dim = f.dim();
    max_cols = std::max(max_cols, f.cols());
  }
  if (inst.kind == "gram") {
    if (!inst.matrix) {
      throw IoError("save_instance: gram kind requires the target matrix");
    }
    dim = static_cast<int>(inst.matrix->rows());
  }
  out << "qfinst 1\n";
  out << "kind " << inst.kind << " m " << inst.factors.size() << " n " << dim << " r "
      << max_cols << "\n";
  for (size_t i = 0; i < inst.factors.size(); ++i) {
    const auto& f = inst.factors[i];
    out << "factor " << i << " " << f.dim() << " " << f.cols() << "\n";
    put_matrix_rows(out, f.U);
  }
  if (inst.matrix) {
    out << "matrix " << inst.matrix->rows() << " " << inst.matrix->cols() << "\n";
    put_matrix_rows(out, *inst.matrix);
  }
  if (inst.c) {
    put_vector(out, "c", *inst.c);
  }
  if (inst.d) {
    put_vector(out, "d", *inst.d);
  }
  out << "end\n";
  if (!out) {
    throw IoError("save_instance: stream write failed");
  }
}

void save_instance_file(const std::string& path, const InstanceText& inst) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("save_instance_file: cannot open '" + path + "'");
  }
  save_instance(out, inst);
}

InstanceText load_instance(std::istream& in) {
  expect_token(in, "qfinst");
  if (next_count(in, "format version") != 1) {
    throw IoError("load_instance: unsupported format version");
  }
  expect_token(in, "kind");
  InstanceText inst;
  inst.kind = next_token(in, "kind value");
  if (inst.kind != "sos" && inst.kind != "gram") {
    throw IoError("load_instance: kind must be 'sos' or 'gram', found '" + inst.kind + "'");
  }
  expect_token(in, "m");
  const long m = next_count(in, "factor count");
  expect_token(in, "n");
  next_count(in, "dimension");
  expect_token(in, "r");
  next_count(in, "max factor width");

  std::string tok = next_token(in, "section tag");
  long seen_factors = 0;
  while (tok == "factor") {
    const long index = next_count(in, "factor index");
    if (index != seen_factors) {
      std::ostringstream os;
      os << "load_instance: factor blocks out of order (expected " << seen_factors
         << ", found " << index << ")";
      throw IoError(os.str());
    }
    const long rows = next_count(in, "factor rows");
    const long cols = next_count(in, "factor cols");
    inst.factors.emplace_back(read_matrix(in, rows, cols, "factor entries"));
    ++seen_factors;
    tok = next_token(in, "section tag");
  }
  if (seen_factors != m) {
    std::ostringstream os;
    os << "load_instance: header promised " << m << " factors, found " << seen_factors;
    throw IoError(os.str());
  }
  while (tok != "end") {
    if (tok == "matrix") {
      const long rows = next_count(in, "matrix rows");
      const long cols = next_count(in, "matrix cols");
      inst.matrix = read_matrix(in, rows, cols, "matrix entries");
    } else if (tok == "c" || tok == "d") {
      const bool is_c = tok == "c";
      const long len = next_count(in, "vector length");
      Matrix column = read_matrix(in, len, 1, is_c ? "c entries" : "d entries");
      if (is_c) {
        inst.c = column.col(0);
      } else {
        inst.d = column.col(0);
      }
    } else {
      throw IoError("load_instance: unknown section tag '" + tok + "'");
    }
    tok = next_token(in, "section tag");
  }
  return inst;
}

InstanceText load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("load_instance_file: cannot open '" + path + "'");
  }
  return load_instance(in);
}

}  // namespace quartsolve
