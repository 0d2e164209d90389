#include "plq/epssub_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "plq/error.hpp"
#include "plq/io.hpp"

namespace plq {
namespace {

void require_eps(double eps) {
  if (!(eps > 0.0) || !is_finite(eps)) {
    throw Error(errc::non_positive_epsilon, "eps must be positive and finite");
  }
}

double piece_bound(const PlqFunction& f, std::size_t i, bool lower) {
  if (lower) return i == 0 ? -kInf : f.breakpoint(i - 1);
  return f.breakpoint(i);
}

void check_in_piece(const PlqFunction& f, std::size_t i, double x,
                    const char* what) {
  const double lo = piece_bound(f, i, true);
  const double hi = piece_bound(f, i, false);
  const double gap = f.tolerance().gap(
      std::max({std::abs(x), is_finite(lo) ? std::abs(lo) : 0.0,
                is_finite(hi) ? std::abs(hi) : 0.0}));
  if ((is_finite(lo) && x < lo - gap) || (is_finite(hi) && x > hi + gap)) {
    throw Error(errc::root_outside_piece, what);
  }
}

}  // namespace

double compute_xb(const PlqFunction& f, const TangentSolveInput& input,
                  double eps) {
  if (input.direction == SolveDirection::xt_from_xbar) {
    return compute_xt(f, input.xt, input.ib, input.it, eps);
  }
  const PlqPiece& anchor = f.piece(input.it);
  const PlqPiece& target = f.piece(input.ib);
  const double st = anchor.slope(input.xt);
  const double yt = anchor.value(input.xt);

  // target(x) - eps = yt + st (x - xt)
  const double A = target.a;
  const double B = target.b - st;
  const double C = target.c - eps - yt + st * input.xt;
  double root;
  if (A == 0.0) {
    if (B == 0.0) {
      throw Error(errc::no_root, "tangent line parallel to the piece");
    }
    root = -C / B;
  } else {
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) {
      if (disc < -f.tolerance().gap(B * B + std::abs(4.0 * A * C))) {
        throw Error(errc::no_root, "tangent line misses the piece");
      }
      disc = 0.0;
    }
    root = (-B + std::sqrt(disc)) / (2.0 * A);  // exit upward: larger root
  }
  check_in_piece(f, input.ib, root, "meeting point misses the target piece");
  return std::clamp(root, piece_bound(f, input.ib, true),
                    piece_bound(f, input.ib, false));
}

double compute_xt(const PlqFunction& f, double xbar, std::size_t ib,
                  std::size_t it, double eps) {
  const PlqPiece& tangent = f.piece(it);
  if (!(tangent.a > 0.0)) {
    throw Error(errc::no_root, "tangency requires a quadratic piece");
  }
  const PlqPiece& host = f.piece(ib);
  double height = (tangent.value(xbar) - host.value(xbar) + eps) / tangent.a;
  if (height < 0.0) {
    const double slack =
        f.tolerance().gap(std::abs(tangent.value(xbar)) +
                          std::abs(host.value(xbar)) + eps) /
        tangent.a;
    if (height < -slack) {
      throw Error(errc::no_root, "no tangency below the given point");
    }
    height = 0.0;
  }
  const double xt = xbar - std::sqrt(height);
  check_in_piece(f, it, xt, "tangency misses its piece");
  return std::clamp(xt, piece_bound(f, it, true), piece_bound(f, it, false));
}

LowerBoundTable build_lower_table(const PlqFunction& f, double eps) {
  require_eps(eps);
  LowerBoundTable table(f, eps);
  std::vector<LowerBoundRow>& rows = table.rows_;
  BuildStats& stats = table.stats_;
  const Tolerance& tol = f.tolerance();

  const auto emit = [&](double x, int t, std::int64_t it, std::int64_t ib,
                        double v) {
    if (!rows.empty() && is_finite(x)) {
      const double last = rows.back().x;
      // suppress zero-width rows so x stays strictly increasing
      if (x <= last + tol.gap(std::max(std::abs(x), std::abs(last)))) return;
    }
    rows.push_back({x, t, it, ib, v});
  };

  if (f.is_needle()) {
    // the set is the whole line at the needle point: -inf lower bound marker
    rows.push_back({kInf, 3, -1, -1, -kInf});
    stats.rows = 1;
    return table;
  }
  const std::size_t n = f.last_index();
  if (n == 0) {
    const PlqPiece& only = f.piece(0);
    if (only.is_linear()) {
      rows.push_back({kInf, 3, -1, -1, only.b});
    } else {
      rows.push_back({kInf, 1, 0, 0, kNaN});
    }
    stats.rows = 1;
    return table;
  }

  // The sweep tracks what the minimal supporting line of the lowered point
  // (xbar, f(xbar) - eps) touches as xbar grows: piece 0's own line when the
  // function starts linear (kAsymptote), a tangency inside quadratic piece
  // cj (kInterior), or the pivot breakpoint cj (kKink). Each regime fills
  // rows until the line (taken at the regime's exit position) meets the
  // lowered function; the touch then advances one structural element.
  enum class Contact { kAsymptote, kInterior, kKink };
  Contact contact;
  std::size_t cj = 0;
  std::size_t ib = 0;

  const PlqPiece& first = f.piece(0);
  if (first.is_infinite()) {
    emit(f.breakpoint(0), 3, -1, 0, kNaN);  // left-of-domain marker
    contact = Contact::kKink;
    ib = 1;
  } else if (first.is_linear()) {
    contact = Contact::kAsymptote;
    ib = 1;
  } else {
    contact = Contact::kInterior;
    ib = 0;
  }

  for (;;) {
    ++stats.loop_iterations;
    int t = 3;
    std::int64_t it_tag = -1;
    double v = kNaN;
    std::size_t solve_it = 0;   // piece whose slope carries the exit line
    std::size_t anchor_bp = 0;  // breakpoint anchoring that line
    switch (contact) {
      case Contact::kAsymptote:
        t = 3; it_tag = -1; v = first.b; solve_it = 0; anchor_bp = 0;
        break;
      case Contact::kInterior:
        t = 1; it_tag = static_cast<std::int64_t>(cj);
        solve_it = cj; anchor_bp = cj;
        break;
      case Contact::kKink:
        t = 2; it_tag = static_cast<std::int64_t>(cj);
        solve_it = cj + 1; anchor_bp = cj;
        break;
    }
    // Bounded-above domains terminate through the infinity branch below
    // before any regime could anchor its line on an infinity piece.
    assert(!f.piece(solve_it).is_infinite());
    const double xt = f.breakpoint(anchor_bp);
    const double yt = f.value_at_breakpoint(anchor_bp);
    const double st = f.piece(solve_it).slope(xt);

    // March across whole pieces while their right-end image stays on or
    // below the line; each crossed breakpoint closes a row for t = 1/2 so no
    // row spans a breakpoint of f.
    while (ib < n && f.value_at_breakpoint(ib) - eps <=
                         yt + st * (f.breakpoint(ib) - xt)) {
      ++stats.loop_iterations;
      if (t != 3) {
        emit(f.breakpoint(ib), t, it_tag, static_cast<std::int64_t>(ib), kNaN);
      }
      ++ib;
    }

    if (ib == n) {
      const PlqPiece& last = f.piece(n);
      if (last.is_infinite()) {
        // domain ends: close the regime there, mark everything beyond
        emit(f.breakpoint(n - 1), t, it_tag,
             t == 3 ? -1 : static_cast<std::int64_t>(n - 1), v);
        emit(kInf, 3, -1, static_cast<std::int64_t>(n), kNaN);
        break;
      }
      // Parallel to within the precision st carries: slopes of a smooth
      // joint re-rounded through 2 a x + b differ by ulps, and dividing eps
      // by that residue would send the exit to a meaningless huge x.
      const PlqPiece& anchor = f.piece(solve_it);
      const double slope_scale =
          2.0 * std::abs(anchor.a) * std::abs(xt) + std::abs(anchor.b) +
          std::abs(last.b);
      if (last.a == 0.0 && tol.close(last.b, st, slope_scale)) {
        // parallel final piece: the regime never exits
        emit(kInf, t, it_tag, t == 3 ? -1 : static_cast<std::int64_t>(n), v);
        break;
      }
    }

    ++stats.xb_solves;
    const double xend =
        compute_xb(f, {xt, solve_it, ib, SolveDirection::xbar_from_xt}, eps);
    emit(xend, t, it_tag, t == 3 ? -1 : static_cast<std::int64_t>(ib), v);

    if (contact == Contact::kAsymptote) {
      contact = Contact::kKink;
      cj = 0;
    } else if (contact == Contact::kInterior) {
      contact = Contact::kKink;  // tangency reached breakpoint cj
    } else {
      ++cj;
      contact = f.piece(cj).a > 0.0 ? Contact::kInterior : Contact::kKink;
    }
    if (contact == Contact::kInterior && cj == n) {
      // tangency roams the unbounded final piece forever
      emit(kInf, 1, static_cast<std::int64_t>(n),
           static_cast<std::int64_t>(n), kNaN);
      break;
    }
    assert(!(contact == Contact::kKink && cj >= n));
  }
  stats.rows = rows.size();
  return table;
}

LowerBoundTable LowerBoundTable::from_rows(PlqFunction f, double eps,
                                           std::vector<LowerBoundRow> rows) {
  require_eps(eps);
  if (rows.empty()) throw Error(errc::empty_input, "no rows");
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    if (!(rows[k].x < rows[k + 1].x)) {
      throw Error(errc::not_sorted, "row bounds must increase");
    }
  }
  if (rows.back().x != kInf) {
    throw Error(errc::bad_infinity_convention, "last row must reach +inf");
  }
  LowerBoundTable table(std::move(f), eps);
  table.rows_ = std::move(rows);
  table.stats_.rows = table.rows_.size();
  return table;
}

std::optional<double> LowerBoundTable::eval_at_row(std::size_t k,
                                                   double xbar) const {
  const LowerBoundRow& row = rows_[k];
  switch (row.t) {
    case 3:
      return row.constant_value();
    case 2: {
      const std::size_t piv = row.tangent_index();
      const double xt = f_.breakpoint(piv);
      const double yt = f_.value_at_breakpoint(piv);
      const double y = f_.piece(row.containing_piece()).value(xbar);
      return (y - eps_ - yt) / (xbar - xt);
    }
    case 1: {
      const double xt =
          compute_xt(f_, xbar, row.containing_piece(), row.tangent_index(),
                     eps_);
      return f_.piece(row.tangent_index()).slope(xt);
    }
    default:
      assert(false && "corrupt row tag");
      return std::nullopt;
  }
}

std::optional<double> LowerBoundTable::eval(double xbar) const {
  if (std::isnan(xbar) || !f_.domain().contains(xbar)) return std::nullopt;
  if (f_.is_needle() || xbar == f_.domain().lo) return -kInf;
  const auto it = std::lower_bound(
      rows_.begin(), rows_.end(), xbar,
      [](const LowerBoundRow& r, double x) { return r.x < x; });
  assert(it != rows_.end());
  return eval_at_row(static_cast<std::size_t>(it - rows_.begin()), xbar);
}

std::vector<std::optional<double>> LowerBoundTable::eval_grid(
    const std::vector<double>& xs) const {
  std::vector<std::optional<double>> out;
  out.reserve(xs.size());
  std::size_t k = 0;
  double prev = -kInf;
  for (const double x : xs) {
    if (std::isnan(x) || x < prev) {
      throw Error(errc::unsorted_input, "grid must be ascending");
    }
    prev = x;
    if (!f_.domain().contains(x)) {
      out.emplace_back(std::nullopt);
      continue;
    }
    if (f_.is_needle() || x == f_.domain().lo) {
      out.emplace_back(-kInf);
      continue;
    }
    while (k < rows_.size() && rows_[k].x < x) ++k;
    out.push_back(eval_at_row(k, x));
  }
  return out;
}

PieceForm LowerBoundTable::classify(std::size_t k) const {
  const LowerBoundRow& row = rows_.at(k);
  if (row.t == 3) return ConstantForm{row.v};
  const PlqPiece& pt = f_.piece(row.tangent_index());
  const PlqPiece& pb = f_.piece(row.containing_piece());
  if (row.t == 2) {
    const double yt = f_.value_at_breakpoint(row.tangent_index());
    return RationalForm{f_.breakpoint(row.tangent_index()), pb.a, pb.b,
                        pb.c - eps_ - yt};
  }
  SqrtQuadraticForm form;
  form.la = 2.0 * pt.a;
  form.lb = pt.b;
  form.qa = 4.0 * pt.a * (pt.a - pb.a);
  form.qb = 4.0 * pt.a * (pt.b - pb.b);
  form.qc = 4.0 * pt.a * (pt.c - pb.c + eps_);
  // Branch sign from a sample inside the row's validity interval.
  const double lo = k == 0 ? -kInf : rows_[k - 1].x;
  const double hi = row.x;
  double mid;
  if (is_finite(lo) && is_finite(hi)) {
    mid = 0.5 * (lo + hi);
  } else if (is_finite(hi)) {
    mid = hi - 1.0;
  } else if (is_finite(lo)) {
    mid = lo + 1.0;
  } else {
    mid = 0.0;
  }
  const std::optional<double> probe = eval(mid);
  if (probe) {
    const double linear = form.la * mid + form.lb;
    const double q = (form.qa * mid + form.qb) * mid + form.qc;
    const double rootv = std::sqrt(q < 0.0 ? 0.0 : q);
    form.sign =
        std::abs(linear - rootv - *probe) <= std::abs(linear + rootv - *probe)
            ? -1
            : 1;
  }
  return form;
}

Interval EpsSubGraph::eval(double xbar) const {
  const std::optional<double> lo = lower_.eval(xbar);
  const std::optional<double> hi = upper_source_.eval(-xbar);
  assert(lo.has_value() == hi.has_value());
  if (!lo || !hi) return Interval::none();
  const double upper = *hi == 0.0 ? 0.0 : -*hi;
  return Interval::closed(*lo, upper);
}

EpsSubGraph build_graph(const PlqFunction& f, double eps) {
  require_eps(eps);
  return EpsSubGraph(build_lower_table(f, eps),
                     build_lower_table(f.reflect(), eps));
}

std::string serialize_lower_table(const LowerBoundTable& table) {
  std::string out = "x,t,it,ib,v\n";
  for (const LowerBoundRow& r : table.rows()) {
    out += format_double(r.x);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += r.it >= 0 ? std::to_string(r.it + 1) : "nan";
    out += ',';
    out += r.ib >= 0 ? std::to_string(r.ib + 1) : "nan";
    out += ',';
    out += format_double(r.v);
    out += '\n';
  }
  return out;
}

std::vector<LowerBoundRow> parse_lower_table_csv(const std::string& text) {
  std::vector<LowerBoundRow> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++line_no;
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "x,t,it,ib,v") {
        throw Error(errc::parse_error, "missing table header");
      }
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) {
      throw Error(errc::parse_error,
                  "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    const auto index_of = [&](const std::string& tok) -> std::int64_t {
      const double d = parse_double(tok);
      if (std::isnan(d)) return -1;
      const auto i = static_cast<std::int64_t>(d);
      if (i < 1 || static_cast<double>(i) != d) {
        throw Error(errc::parse_error, "line " + std::to_string(line_no) +
                                           ": bad index '" + tok + "'");
      }
      return i - 1;
    };
    LowerBoundRow r;
    r.x = parse_double(fields[0]);
    const double t = parse_double(fields[1]);
    if (t != 1.0 && t != 2.0 && t != 3.0) {
      throw Error(errc::parse_error,
                  "line " + std::to_string(line_no) + ": bad row tag");
    }
    r.t = static_cast<int>(t);
    r.it = index_of(fields[2]);
    r.ib = index_of(fields[3]);
    r.v = parse_double(fields[4]);
    rows.push_back(r);
  }
  if (!saw_header) throw Error(errc::parse_error, "missing table header");
  return rows;
}

}  // namespace plq
