#include "lqgame/config_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "lqgame/errors.hpp"

namespace lqgame {
namespace {

// ---- tokenizer -------------------------------------------------------------

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  double number = 0.0;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      double value = std::strtod(begin, &end);
      if (end == begin)
        throw ParseError(line_ + 1, "", "malformed number");
      tok_.kind = Token::Number;
      tok_.number = value;
      tok_.text.assign(begin, static_cast<std::size_t>(end - begin));
      pos_ += static_cast<std::size_t>(end - begin);
      return;
    }
    if (c == '=' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' ||
        c == ':') {
      tok_.kind = Token::Punct;
      tok_.text = std::string(1, c);
      ++pos_;
      return;
    }
    throw ParseError(line_ + 1, "", std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 0;
  Token tok_;
};

// ---- value parsing ---------------------------------------------------------

struct Value {
  enum Kind { Number, Ident, Array, Dict } kind = Number;
  double number = 0.0;
  std::string ident;
  std::vector<Value> items;                    // Array
  std::vector<std::pair<int, Value>> entries;  // Dict, keyed by stage index
  int line = 0;
};

Value parse_value(Lexer& lex, const std::string& field) {
  Token t = lex.take();
  Value v;
  v.line = t.line + 1;
  if (t.kind == Token::Number) {
    v.kind = Value::Number;
    v.number = t.number;
    return v;
  }
  if (t.kind == Token::Ident) {
    v.kind = Value::Ident;
    v.ident = t.text;
    return v;
  }
  if (t.kind == Token::Punct && t.text == "[") {
    v.kind = Value::Array;
    if (lex.peek().kind == Token::Punct && lex.peek().text == "]") {
      lex.take();
      return v;
    }
    for (;;) {
      v.items.push_back(parse_value(lex, field));
      Token sep = lex.take();
      if (sep.kind == Token::Punct && sep.text == "]") return v;
      if (!(sep.kind == Token::Punct && sep.text == ","))
        throw ParseError(sep.line + 1, field, "expected ',' or ']' in array");
    }
  }
  if (t.kind == Token::Punct && t.text == "{") {
    v.kind = Value::Dict;
    if (lex.peek().kind == Token::Punct && lex.peek().text == "}") {
      lex.take();
      return v;
    }
    for (;;) {
      Token key = lex.take();
      if (key.kind != Token::Number || key.number != static_cast<int>(key.number))
        throw ParseError(key.line + 1, field, "override keys must be stage indices");
      Token colon = lex.take();
      if (!(colon.kind == Token::Punct && colon.text == ":"))
        throw ParseError(colon.line + 1, field, "expected ':' after stage index");
      v.entries.emplace_back(static_cast<int>(key.number), parse_value(lex, field));
      Token sep = lex.take();
      if (sep.kind == Token::Punct && sep.text == "}") return v;
      if (!(sep.kind == Token::Punct && sep.text == ","))
        throw ParseError(sep.line + 1, field, "expected ',' or '}' in override map");
    }
  }
  throw ParseError(t.line + 1, field, "expected a value");
}

// ---- value -> typed fields -------------------------------------------------

MatrixXd as_matrix(const Value& v, const std::string& field) {
  if (v.kind == Value::Number) return MatrixXd::Constant(1, 1, v.number);
  if (v.kind != Value::Array)
    throw ParseError(v.line, field, "expected a number or nested array");
  if (v.items.empty()) throw ParseError(v.line, field, "matrix must not be empty");
  // Nested array of rows; require rectangular.
  if (v.items[0].kind != Value::Array)
    throw ParseError(v.line, field,
                     "matrix rows must be arrays, e.g. [[0.9]] (flat arrays are "
                     "reserved for vectors)");
  const std::size_t rows = v.items.size();
  const std::size_t cols = v.items[0].items.size();
  MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Value& row = v.items[i];
    if (row.kind != Value::Array || row.items.size() != cols)
      throw ParseError(row.line, field, "matrix rows must have equal lengths");
    for (std::size_t j = 0; j < cols; ++j) {
      if (row.items[j].kind != Value::Number)
        throw ParseError(row.items[j].line, field, "matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row.items[j].number;
    }
  }
  return m;
}

VectorXd as_vector(const Value& v, const std::string& field) {
  if (v.kind == Value::Number) return VectorXd::Constant(1, v.number);
  if (v.kind != Value::Array)
    throw ParseError(v.line, field, "expected a number or flat array");
  VectorXd out(v.items.size());
  for (std::size_t i = 0; i < v.items.size(); ++i) {
    if (v.items[i].kind != Value::Number)
      throw ParseError(v.items[i].line, field, "vector entries must be numbers");
    out[static_cast<Eigen::Index>(i)] = v.items[i].number;
  }
  return out;
}

double as_number(const Value& v, const std::string& field) {
  if (v.kind != Value::Number)
    throw ParseError(v.line, field, "expected a number");
  return v.number;
}

int as_int(const Value& v, const std::string& field) {
  double d = as_number(v, field);
  if (d != static_cast<int>(d))
    throw ParseError(v.line, field, "expected an integer");
  return static_cast<int>(d);
}

}  // namespace

// ---- number formatting -----------------------------------------------------

std::string format_number(double v) {
  char buf[40];
  // Integers of moderate size read better without an exponent.
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
  }
  // Otherwise the shortest representation that round-trips exactly.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  // Make the numeric type visible for readers: always keep a '.' or exponent.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string format_matrix(const MatrixXd& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i == 0 ? "[" : ", [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += format_number(m(i, j));
    }
    out += "]";
  }
  out += "]";
  return out;
}

std::string format_vector(const VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  out += "]";
  return out;
}

}  // namespace

ConfigDoc parse_config(const std::string& text) {
  Lexer lex(text);
  ConfigDoc doc;
  std::set<std::string> seen;
  bool have_horizon = false, have_A = false, have_Bd = false, have_Ba = false,
       have_C = false, have_D = false, have_E = false, have_ss = false,
       have_so = false, have_Q = false, have_QN = false, have_Rd = false,
       have_Ra = false, have_Od = false, have_Oa = false;

  while (lex.peek().kind != Token::End) {
    Token key = lex.take();
    if (key.kind != Token::Ident)
      throw ParseError(key.line + 1, "", "expected a field name");
    Token eq = lex.take();
    if (!(eq.kind == Token::Punct && eq.text == "="))
      throw ParseError(eq.line + 1, key.text, "expected '=' after field name");
    if (!seen.insert(key.text).second)
      throw ParseError(key.line + 1, key.text, "duplicate field");
    Value v = parse_value(lex, key.text);

    const std::string& k = key.text;
    if (k == "horizon") {
      doc.horizon = as_int(v, k);
      have_horizon = true;
    } else if (k == "A") {
      doc.A = as_matrix(v, k);
      have_A = true;
    } else if (k == "Bd") {
      doc.Bd = as_matrix(v, k);
      have_Bd = true;
    } else if (k == "Ba") {
      doc.Ba = as_matrix(v, k);
      have_Ba = true;
    } else if (k == "C") {
      doc.C = as_matrix(v, k);
      have_C = true;
    } else if (k == "D") {
      doc.D = as_matrix(v, k);
      have_D = true;
    } else if (k == "E") {
      doc.E = as_matrix(v, k);
      have_E = true;
    } else if (k == "sigma_s") {
      doc.sigma_s = as_matrix(v, k);
      have_ss = true;
    } else if (k == "sigma_o") {
      doc.sigma_o = as_matrix(v, k);
      have_so = true;
    } else if (k == "x0_known") {
      doc.x0_known = as_vector(v, k);
    } else if (k == "x0_mean") {
      doc.x0_mean = as_vector(v, k);
    } else if (k == "x0_cov") {
      doc.x0_cov = as_matrix(v, k);
    } else if (k == "Q") {
      doc.Q = as_matrix(v, k);
      have_Q = true;
    } else if (k == "Q_N") {
      doc.Q_N = as_matrix(v, k);
      have_QN = true;
    } else if (k == "Rd") {
      doc.Rd = as_matrix(v, k);
      have_Rd = true;
    } else if (k == "Ra") {
      doc.Ra = as_matrix(v, k);
      have_Ra = true;
    } else if (k == "Od") {
      doc.Od = as_number(v, k);
      have_Od = true;
    } else if (k == "Oa") {
      doc.Oa = as_number(v, k);
      have_Oa = true;
    } else if (k == "Q_overrides" || k == "Rd_overrides" || k == "Ra_overrides") {
      if (v.kind != Value::Dict)
        throw ParseError(v.line, k, "expected an override map {stage: value}");
      auto& target = k == "Q_overrides" ? doc.Q_overrides
                     : k == "Rd_overrides" ? doc.Rd_overrides
                                           : doc.Ra_overrides;
      for (const auto& [idx, val] : v.entries) target[idx] = as_matrix(val, k);
    } else if (k == "Od_overrides" || k == "Oa_overrides") {
      if (v.kind != Value::Dict)
        throw ParseError(v.line, k, "expected an override map {stage: value}");
      auto& target = k == "Od_overrides" ? doc.Od_overrides : doc.Oa_overrides;
      for (const auto& [idx, val] : v.entries) target[idx] = as_number(val, k);
    } else if (k == "info_structure") {
      if (v.kind != Value::Ident)
        throw ParseError(v.line, k,
                         "expected defender_leads, attacker_leads or simultaneous");
      if (v.ident == "defender_leads")
        doc.info_structure = InfoStructure::DefenderLeads;
      else if (v.ident == "attacker_leads")
        doc.info_structure = InfoStructure::AttackerLeads;
      else if (v.ident == "simultaneous")
        doc.info_structure = InfoStructure::Simultaneous;
      else
        throw ParseError(v.line, k, "unknown info structure '" + v.ident + "'");
    } else {
      throw ParseError(key.line + 1, k, "unknown field");
    }
  }

  auto require = [](bool have, const char* name) {
    if (!have)
      throw ParseError(0, name, std::string("missing required field '") + name + "'");
  };
  require(have_horizon, "horizon");
  require(have_A, "A");
  require(have_Bd, "Bd");
  require(have_Ba, "Ba");
  require(have_C, "C");
  require(have_D, "D");
  require(have_E, "E");
  require(have_ss, "sigma_s");
  require(have_so, "sigma_o");
  require(have_Q, "Q");
  require(have_QN, "Q_N");
  require(have_Rd, "Rd");
  require(have_Ra, "Ra");
  require(have_Od, "Od");
  require(have_Oa, "Oa");
  if (doc.x0_known) {
    if (doc.x0_mean || doc.x0_cov)
      throw ParseError(0, "x0_known",
                       "give either x0_known or the pair x0_mean/x0_cov, not both");
  } else if (!doc.x0_mean || !doc.x0_cov) {
    throw ParseError(0, "x0_mean",
                     "missing initial state: give x0_known or both x0_mean and x0_cov");
  }
  return doc;
}

ConfigDoc parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GameSpec build_spec(const ConfigDoc& doc) {
  GameSpec s;
  s.horizon = doc.horizon;
  s.A = doc.A;
  s.Bd = doc.Bd;
  s.Ba = doc.Ba;
  s.C = doc.C;
  s.D = doc.D;
  s.E = doc.E;
  s.sigma_s = doc.sigma_s;
  s.sigma_o = doc.sigma_o;
  if (doc.x0_known) {
    s.initial_kind = InitialStateKind::KnownExactly;
    s.x0_mean = *doc.x0_known;
    s.x0_cov = MatrixXd::Zero(s.x0_mean.size(), s.x0_mean.size());
  } else {
    s.initial_kind = InitialStateKind::Gaussian;
    s.x0_mean = *doc.x0_mean;
    s.x0_cov = *doc.x0_cov;
  }
  const int N = doc.horizon;
  if (N < 1) throw ParseError(0, "horizon", "horizon must be at least 1");
  s.Q.assign(static_cast<std::size_t>(N), doc.Q);
  s.Q.push_back(doc.Q_N);
  s.Rd.assign(static_cast<std::size_t>(N), doc.Rd);
  s.Ra.assign(static_cast<std::size_t>(N), doc.Ra);
  s.Od.assign(static_cast<std::size_t>(N), doc.Od);
  s.Oa.assign(static_cast<std::size_t>(N), doc.Oa);
  s.info_structure = doc.info_structure;

  auto apply = [N](auto& list, const auto& overrides, const char* name) {
    for (const auto& [idx, val] : overrides) {
      if (idx < 0 || idx >= N)
        throw ParseError(0, name,
                         "override stage " + std::to_string(idx) +
                             " out of range [0, " + std::to_string(N - 1) + "]");
      list[static_cast<std::size_t>(idx)] = val;
    }
  };
  apply(s.Q, doc.Q_overrides, "Q_overrides");
  apply(s.Rd, doc.Rd_overrides, "Rd_overrides");
  apply(s.Ra, doc.Ra_overrides, "Ra_overrides");
  apply(s.Od, doc.Od_overrides, "Od_overrides");
  apply(s.Oa, doc.Oa_overrides, "Oa_overrides");
  return s;
}

namespace {
GameSpec finish(GameSpec spec) {
  auto violations = validate(spec);
  if (!violations.empty()) {
    std::string msg = "invalid game description:";
    for (const auto& v : violations) msg += "\n  " + v.message;
    throw ParseError(0, violations.front().field, msg);
  }
  return spec;
}
}  // namespace

GameSpec parse_spec(const std::string& text) {
  return finish(build_spec(parse_config(text)));
}

GameSpec parse_spec_file(const std::string& path) {
  return finish(build_spec(parse_config_file(path)));
}

std::string serialize_spec(const GameSpec& spec) {
  std::ostringstream out;
  const int N = spec.horizon;
  out << "horizon = " << N << "\n";
  out << "A = " << format_matrix(spec.A) << "\n";
  out << "Bd = " << format_matrix(spec.Bd) << "\n";
  out << "Ba = " << format_matrix(spec.Ba) << "\n";
  out << "C = " << format_matrix(spec.C) << "\n";
  out << "D = " << format_matrix(spec.D) << "\n";
  out << "E = " << format_matrix(spec.E) << "\n";
  out << "sigma_s = " << format_matrix(spec.sigma_s) << "\n";
  out << "sigma_o = " << format_matrix(spec.sigma_o) << "\n";
  if (spec.initial_kind == InitialStateKind::KnownExactly) {
    out << "x0_known = " << format_vector(spec.x0_mean) << "\n";
  } else {
    out << "x0_mean = " << format_vector(spec.x0_mean) << "\n";
    out << "x0_cov = " << format_matrix(spec.x0_cov) << "\n";
  }

  auto emit_matrix_list = [&](const char* name, const std::vector<MatrixXd>& list) {
    out << name << " = " << format_matrix(list[0]) << "\n";
    std::string overrides;
    for (std::size_t n = 1; n < list.size(); ++n) {
      if (list[n].rows() != list[0].rows() || list[n].cols() != list[0].cols() ||
          list[n] != list[0]) {
        if (!overrides.empty()) overrides += ", ";
        overrides += std::to_string(n) + ": " + format_matrix(list[n]);
      }
    }
    if (!overrides.empty())
      out << name << "_overrides = {" << overrides << "}\n";
  };
  auto emit_scalar_list = [&](const char* name, const std::vector<double>& list) {
    out << name << " = " << format_number(list[0]) << "\n";
    std::string overrides;
    for (std::size_t n = 1; n < list.size(); ++n) {
      if (list[n] != list[0]) {
        if (!overrides.empty()) overrides += ", ";
        overrides += std::to_string(n) + ": " + format_number(list[n]);
      }
    }
    if (!overrides.empty())
      out << name << "_overrides = {" << overrides << "}\n";
  };

  // Q's per-stage part excludes the terminal entry, which has its own key.
  std::vector<MatrixXd> q_stages(spec.Q.begin(), spec.Q.end() - 1);
  emit_matrix_list("Q", q_stages);
  out << "Q_N = " << format_matrix(spec.Q.back()) << "\n";
  emit_matrix_list("Rd", spec.Rd);
  emit_matrix_list("Ra", spec.Ra);
  emit_scalar_list("Od", spec.Od);
  emit_scalar_list("Oa", spec.Oa);
  out << "info_structure = " << to_string(spec.info_structure) << "\n";
  return out.str();
}

}  // namespace lqgame
