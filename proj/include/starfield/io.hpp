#pragma once

#include <string>
#include <string_view>

#include "starfield/findim.hpp"
#include "starfield/graphs.hpp"
#include "starfield/hbar_series.hpp"
#include "starfield/miura.hpp"
#include "starfield/total_diff_op.hpp"
#include "starfield/var_star.hpp"

namespace starfield {

/// Where a piece of text starts inside a file, for error locations.
struct SourcePos {
    int line = 1;
    int column = 1;
};

/// Jet expression: u<i>, xi<i> with derivative suffix _<dirs> (x, y, z or
/// x<k>), coordinates x, y, z, x<k>, integers, exp(<linear form in fields>),
/// + - * / ^ and parentheses. Division only by nonzero constants.
/// max_field > 0 rejects larger field indices.
DiffPoly parse_expression(std::string_view text, int max_field = 0, SourcePos at = {});

/// Operator expression: sums of  <expr>, <expr>*D(<dirs>)  and  D^k  with D
/// the rightmost factor of a product. Returns a 1x1 operator.
TotalDiffOp parse_operator_expression(std::string_view text, int max_field = 0, SourcePos at = {});

std::string print_generator(GenKey k);
std::string print_expression(const DiffPoly& p);
/// "(<p0>) + h*(<p1>) + h^2*(<p2>)"
std::string print_series(const HbarSeries& s);
/// Entries as "A[i,j] = <op>" lines, zero entries omitted ("0" if all zero).
std::string print_operator(const TotalDiffOp& A, const std::string& name = "A");
std::string print_entry(const TotalDiffOp::Entry& e);
/// "int(<density>)" for the connected part plus products of integrals.
std::string print_multilocal(const MultilocalSum& s);
/// Graph file syntax on one line.
std::string print_graph(const KontsevichGraph& g);

/// "dim n" then "P[i,j] = <expr>" lines.
Bivector parse_bivector(std::string_view text);

/// Graph file: "sinks s; internal k;" then "e v: (a,b)" / "j v: (a,b,c)".
/// Separators are newlines or ';', '#' starts a comment.
LeibnizGraph parse_graph(std::string_view text);
/// Throws DomainError if the graph has a Jacobiator vertex.
KontsevichGraph to_kontsevich(const LeibnizGraph& g);

struct OperatorFile {
    int fields = 1;
    int base_dim = 1;
    TotalDiffOp op{1, 1};
};

/// "fields n", "base m", then "A[i,j] = <operator expr>" lines.
OperatorFile parse_operator_file(std::string_view text);

/// "source n", "target k", "base m", then "w<i> = <expr in source fields>".
MiuraMap parse_miura_file(std::string_view text);

} // namespace starfield
