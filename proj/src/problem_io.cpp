#include "hydrolax/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "hydrolax/catalog.hpp"

namespace hydrolax {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("problem file line " + std::to_string(line_no) + ": " + what);
}

int parse_sign(const std::string& tok, int line_no) {
  if (tok == "+1" || tok == "1") return 1;
  if (tok == "-1") return -1;
  fail(line_no, "sign must be +1 or -1, got '" + tok + "'");
}

double parse_num(const std::string& tok, int line_no) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) fail(line_no, "malformed number '" + tok + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    fail(line_no, "malformed number '" + tok + "'");
  }
}

Expr parse_member_expression(const std::string& text, int line_no) {
  try {
    Expr e = parse_expression(text);
    if (e.depends_on_lambda()) fail(line_no, "field expressions cannot use lambda");
    return e;
  } catch (const ParseError& pe) {
    fail(line_no, pe.what());
  }
}

struct RawLine {
  int number;
  std::string keyword;
  std::string payload;
};

} // namespace

ProblemSpec parse_problem_text(const std::string& text) {
  std::istringstream in(text);
  return parse_problem_stream(in);
}

ProblemSpec parse_problem_stream(std::istream& in) {
  std::vector<RawLine> lines;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto space = line.find_first_of(" \t");
    RawLine raw;
    raw.number = line_no;
    raw.keyword = space == std::string::npos ? line : line.substr(0, space);
    raw.payload = space == std::string::npos ? std::string{} : trim(line.substr(space));
    lines.push_back(std::move(raw));
  }

  auto find_unique = [&](const std::string& key) -> const RawLine* {
    const RawLine* found = nullptr;
    for (const auto& l : lines)
      if (l.keyword == key) {
        if (found) fail(l.number, "duplicate '" + key + "' section");
        found = &l;
      }
    return found;
  };

  const RawLine* dim_line = find_unique("dimension");
  if (!dim_line) throw ParseError("problem file: missing 'dimension' section");
  const auto dim_tokens = words(dim_line->payload);
  if (dim_tokens.size() != 1) fail(dim_line->number, "dimension expects one integer");
  const int n = static_cast<int>(parse_num(dim_tokens[0], dim_line->number));
  if (n < 2 || n > 9) fail(dim_line->number, "dimension must be between 2 and 9");

  ProblemSpec p;
  p.frame.dim = n;
  p.frame.eps2.assign(static_cast<size_t>(n), 1);

  const RawLine* domain_line = find_unique("domain");
  if (!domain_line) throw ParseError("problem file: missing 'domain' section");
  {
    std::vector<AxisSpec> axes(static_cast<size_t>(n));
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (const auto& fieldspec : split(domain_line->payload, ';')) {
      const auto toks = words(fieldspec);
      if (toks.size() != 4)
        fail(domain_line->number, "domain entries are 'u<i> <lo> <hi> <nodes>'");
      if (toks[0].size() != 2 || toks[0][0] != 'u' || toks[0][1] < '1' || toks[0][1] > '9')
        fail(domain_line->number, "bad axis name '" + toks[0] + "'");
      const int axis = toks[0][1] - '1';
      if (axis >= n) fail(domain_line->number, "axis " + toks[0] + " exceeds the dimension");
      if (seen[static_cast<size_t>(axis)])
        fail(domain_line->number, "axis " + toks[0] + " specified twice");
      seen[static_cast<size_t>(axis)] = true;
      AxisSpec ax;
      ax.lo = parse_num(toks[1], domain_line->number);
      ax.hi = parse_num(toks[2], domain_line->number);
      ax.count = static_cast<int>(parse_num(toks[3], domain_line->number));
      axes[static_cast<size_t>(axis)] = ax;
    }
    for (int a = 0; a < n; ++a)
      if (!seen[static_cast<size_t>(a)])
        fail(domain_line->number, "axis u" + std::to_string(a + 1) + " missing from domain");
    try {
      p.grid = GridSpec(std::move(axes));
    } catch (const ConfigError& ce) {
      fail(domain_line->number, ce.what());
    }
  }

  if (const RawLine* l = find_unique("signs2")) {
    const auto toks = words(l->payload);
    if (static_cast<int>(toks.size()) != n) fail(l->number, "signs2 expects one sign per axis");
    for (int i = 0; i < n; ++i) p.frame.eps2[static_cast<size_t>(i)] = parse_sign(toks[static_cast<size_t>(i)], l->number);
  }

  const RawLine* lame_line = find_unique("lame");
  if (!lame_line) throw ParseError("problem file: missing 'lame' section");
  {
    const auto fields = split(lame_line->payload, ';');
    if (static_cast<int>(fields.size()) != n)
      fail(lame_line->number, "lame expects one expression per axis");
    for (const auto& f : fields)
      p.frame.H.push_back(Field::closed(parse_member_expression(f, lame_line->number)));
  }

  const RawLine* pencil_line = find_unique("pencil");
  const RawLine* signs1_line = find_unique("signs1");
  if (pencil_line) {
    PencilSpec pencil;
    const auto fields = split(pencil_line->payload, ';');
    if (static_cast<int>(fields.size()) != n)
      fail(pencil_line->number, "pencil expects one expression per axis");
    for (const auto& f : fields)
      pencil.f.push_back(parse_member_expression(f, pencil_line->number));
    if (!signs1_line)
      throw ParseError("problem file: 'signs1' is required when a pencil is present");
    const auto toks = words(signs1_line->payload);
    if (static_cast<int>(toks.size()) != n)
      fail(signs1_line->number, "signs1 expects one sign per axis");
    for (const auto& t : toks) pencil.eps1.push_back(parse_sign(t, signs1_line->number));
    p.pencil = std::move(pencil);
  } else if (signs1_line) {
    fail(signs1_line->number, "'signs1' without a 'pencil' section");
  }

  const RawLine* k_line = find_unique("nonlocal2K");
  bool have_nl2_lines = false;
  for (const auto& l : lines) {
    if (l.keyword == "nonlocal2") {
      have_nl2_lines = true;
      const auto fields = split(l.payload, ';');
      if (static_cast<int>(fields.size()) != n + 1)
        fail(l.number, "nonlocal2 expects a sign and one expression per axis");
      NonlocalEntry e;
      e.eps = parse_sign(fields[0], l.number);
      for (int i = 1; i <= n; ++i)
        e.H.push_back(Field::closed(parse_member_expression(fields[static_cast<size_t>(i)], l.number)));
      p.nl2.entries.push_back(std::move(e));
    } else if (l.keyword == "nonlocal1") {
      if (!pencil_line) fail(l.number, "'nonlocal1' requires a 'pencil' section");
      const auto fields = split(l.payload, ';');
      if (static_cast<int>(fields.size()) != n + 1)
        fail(l.number, "nonlocal1 expects a sign and one expression per axis");
      NonlocalEntry e;
      e.eps = parse_sign(fields[0], l.number);
      for (int i = 1; i <= n; ++i)
        e.H.push_back(Field::closed(parse_member_expression(fields[static_cast<size_t>(i)], l.number)));
      if (!p.nl1) p.nl1 = NonlocalSet{};
      p.nl1->entries.push_back(std::move(e));
    } else if (l.keyword != "dimension" && l.keyword != "domain" && l.keyword != "signs2" &&
               l.keyword != "lame" && l.keyword != "pencil" && l.keyword != "signs1" &&
               l.keyword != "nonlocal2K") {
      fail(l.number, "unknown section '" + l.keyword + "'");
    }
  }
  if (k_line) {
    if (have_nl2_lines)
      fail(k_line->number, "'nonlocal2K' and 'nonlocal2' are mutually exclusive");
    const auto toks = words(k_line->payload);
    if (toks.size() != 1) fail(k_line->number, "nonlocal2K expects one number");
    p.nl2.curvature_shortcut = Complex(parse_num(toks[0], k_line->number), 0.0);
  }

  return p;
}

ProblemSpec load_problem(const std::string& spec) {
  constexpr std::string_view prefix = "catalog:";
  if (spec.rfind(prefix, 0) == 0) return get_example(spec.substr(prefix.size())).problem;
  std::ifstream in(spec);
  if (!in) throw ConfigError("cannot open problem file '" + spec + "'");
  return parse_problem_stream(in);
}

std::string dump_problem(const ProblemSpec& p) {
  if (!p.beta_perturbations.empty())
    throw ConfigError("raw beta offsets are not representable in the problem-file format");
  const int n = p.frame.dim;
  std::string out;

  out += "dimension " + std::to_string(n) + "\n";

  out += "domain ";
  for (int a = 0; a < n; ++a) {
    if (a > 0) out += " ; ";
    const auto& ax = p.grid.axis(a);
    out += "u" + std::to_string(a + 1) + " " + format_double(ax.lo) + " " +
           format_double(ax.hi) + " " + std::to_string(ax.count);
  }
  out += "\n";

  out += "signs2";
  for (int i = 0; i < n; ++i)
    out += p.frame.eps2[static_cast<size_t>(i)] > 0 ? " +1" : " -1";
  out += "\n";

  out += "lame ";
  for (int i = 0; i < n; ++i) {
    if (i > 0) out += " ; ";
    out += p.frame.H[static_cast<size_t>(i)].expr().str();
  }
  out += "\n";

  if (p.pencil) {
    out += "pencil ";
    for (int i = 0; i < n; ++i) {
      if (i > 0) out += " ; ";
      out += p.pencil->f[static_cast<size_t>(i)].str();
    }
    out += "\nsigns1";
    for (int i = 0; i < n; ++i)
      out += p.pencil->eps1[static_cast<size_t>(i)] > 0 ? " +1" : " -1";
    out += "\n";
  }

  if (p.nl2.curvature_shortcut) {
    if (p.nl2.curvature_shortcut->imag() != 0.0)
      throw ConfigError("complex curvature constants are not representable");
    out += "nonlocal2K " + format_double(p.nl2.curvature_shortcut->real()) + "\n";
  }
  for (const auto& e : p.nl2.entries) {
    out += "nonlocal2 ";
    out += e.eps > 0 ? "+1" : "-1";
    for (const auto& h : e.H) out += " ; " + h.expr().str();
    out += "\n";
  }
  if (p.nl1) {
    for (const auto& e : p.nl1->entries) {
      out += "nonlocal1 ";
      out += e.eps > 0 ? "+1" : "-1";
      for (const auto& h : e.H) out += " ; " + h.expr().str();
      out += "\n";
    }
  }
  return out;
}

} // namespace hydrolax
