#ifndef HYDROLAX_PROBLEM_IO_HPP
#define HYDROLAX_PROBLEM_IO_HPP

#include <iosfwd>
#include <string>

#include "hydrolax/residuals.hpp"

namespace hydrolax {

/// Problem-file format (UTF-8, line oriented, '#' comments, sections in
/// any order):
///
///   dimension N
///   domain u1 <lo> <hi> <nodes> ; u2 <lo> <hi> <nodes> ; ...
///   signs2 <+1|-1> ...                    (optional, default all +1)
///   lame <expr> ; <expr> ; ...
///   pencil <expr-in-u1> ; <expr-in-u2> ;  (optional)
///   signs1 <+1|-1> ...                    (required iff pencil present)
///   nonlocal2 <+1|-1> ; <expr> ; ...      (repeatable)
///   nonlocal2K <K>                        (exclusive with nonlocal2)
///   nonlocal1 <+1|-1> ; <expr> ; ...      (repeatable; requires pencil)
ProblemSpec parse_problem_text(const std::string& text);
ProblemSpec parse_problem_stream(std::istream& in);

/// "catalog:<name>" resolves through the example registry; anything else
/// is a file path.
ProblemSpec load_problem(const std::string& spec);

/// Canonical text form; parse(dump(p)) round-trips byte-identically.
std::string dump_problem(const ProblemSpec& p);

} // namespace hydrolax

#endif
