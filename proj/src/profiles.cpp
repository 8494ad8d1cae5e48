#include "spreadlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spreadlab/error.hpp"
#include "spreadlab/textio.hpp"

namespace spreadlab {

namespace {

double lerp_at(double x0, double x1, double v0, double v1, double x) {
    return v0 + (v1 - v0) * ((x - x0) / (x1 - x0));
}

// Pieces of the non-periodic base function on [a, b], with the constant
// tails included.
void append_base_pieces(const std::vector<double>& bp, const std::vector<double>& v, double a,
                        double b, double shift, std::vector<LinearPiece>& out) {
    // Coordinates here are in base frame; `shift` is added on output.
    if (a < bp.front()) {
        out.push_back({a + shift, std::min(b, bp.front()) + shift, v.front(), v.front()});
    }
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double lo = std::max(a, bp[i]);
        const double hi = std::min(b, bp[i + 1]);
        if (!(hi > lo)) continue;
        const double vlo = lo == bp[i] ? v[i] : lerp_at(bp[i], bp[i + 1], v[i], v[i + 1], lo);
        const double vhi =
            hi == bp[i + 1] ? v[i + 1] : lerp_at(bp[i], bp[i + 1], v[i], v[i + 1], hi);
        out.push_back({lo + shift, hi + shift, vlo, vhi});
    }
    if (b > bp.back()) {
        out.push_back({std::max(a, bp.back()) + shift, b + shift, v.back(), v.back()});
    }
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values,
                                 std::optional<double> period)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), period_(period) {
    if (breakpoints_.empty()) throw InvalidArgument("piecewise-linear function needs a breakpoint");
    if (breakpoints_.size() != values_.size()) {
        throw InvalidArgument("breakpoints and values differ in length");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i])) throw InvalidArgument("non-finite breakpoint");
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
            throw InvalidArgument("breakpoints must be strictly increasing");
        }
        if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
            throw InvalidArgument("piecewise-linear values must lie in [0, 1]");
        }
    }
    if (period_) {
        const double L = *period_;
        if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("period must be positive");
        const double cell_start = breakpoints_.back() - L;
        if (cell_start < breakpoints_.front() - 1e-12 * L) {
            throw InvalidArgument("periodic cell does not fit inside the breakpoints");
        }
        if (std::abs(eval(cell_start) - values_.back()) > 1e-12) {
            throw InvalidArgument("periodic cell is discontinuous at its seam");
        }
    }
}

PiecewiseLinear PiecewiseLinear::constant(double value) { return {{0.0}, {value}}; }

double PiecewiseLinear::eval(double x) const noexcept {
    if (x <= breakpoints_.front()) return values_.front();
    if (x >= breakpoints_.back()) {
        if (!period_) return values_.back();
        const double L = *period_;
        x = breakpoints_.back() - L + std::fmod(x - breakpoints_.back(), L);
        if (x <= breakpoints_.front()) return values_.front();
    }
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    if (i + 1 >= breakpoints_.size()) return values_.back();
    return lerp_at(breakpoints_[i], breakpoints_[i + 1], values_[i], values_[i + 1], x);
}

double PiecewiseLinear::min_value() const noexcept {
    return *std::min_element(values_.begin(), values_.end());
}

double PiecewiseLinear::max_value() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

std::vector<LinearPiece> PiecewiseLinear::pieces(double a, double b) const {
    std::vector<LinearPiece> out;
    if (!(b > a)) return out;
    const double last = breakpoints_.back();
    if (!period_ || b <= last) {
        append_base_pieces(breakpoints_, values_, a, b, 0.0, out);
        return out;
    }
    if (a < last) append_base_pieces(breakpoints_, values_, a, last, 0.0, out);
    const double L = *period_;
    const double cell_start = last - L;
    // Repetition k covers [last + k L, last + (k + 1) L].
    auto k = static_cast<long>(std::floor(std::max(0.0, a - last) / L));
    for (;; ++k) {
        const double shift = static_cast<double>(k + 1) * L;
        const double lo = std::max(a, last + static_cast<double>(k) * L);
        const double hi = std::min(b, last + shift);
        if (lo >= b) break;
        if (hi > lo) {
            std::vector<LinearPiece> cell;
            append_base_pieces(breakpoints_, values_, std::max(cell_start, lo - shift),
                               std::min(last, hi - shift), 0.0, cell);
            for (auto piece : cell) {
                piece.x0 += shift;
                piece.x1 += shift;
                out.push_back(piece);
            }
        }
    }
    return out;
}

double PiecewiseLinear::integral(double a, double b) const {
    double total = 0.0;
    for (const auto& p : pieces(a, b)) total += 0.5 * (p.x1 - p.x0) * (p.v0 + p.v1);
    return total;
}

void PlateauSequence::validate() const {
    if (x.size() < 2) throw InvalidArgument("plateau sequence needs at least two terms");
    if (x.front() != 1.0) throw InvalidArgument("plateau sequence must start at x_0 = 1");
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (!(x[i + 1] - x[i] >= 3.0)) {
            throw InvalidArgument("plateau sequence gap x_" + std::to_string(i + 1) + " - x_" +
                                  std::to_string(i) + " is below 3");
        }
    }
    if (!(alpha >= 0.0) || !(alpha < beta)) {
        throw InvalidArgument("plateau levels must satisfy 0 <= alpha < beta");
    }
}

double PlateauSequence::z(std::size_t n) const {
    if (n + 1 >= x.size()) throw InvalidArgument("z_n needs x_{n+1}");
    return std::sqrt(x[n] * x[n + 1]);
}

std::vector<double> build_sequence_geometric(double ratio, int count) {
    if (!(ratio > 1.0)) throw InvalidArgument("geometric ratio must exceed 1");
    if (count < 2) throw InvalidArgument("sequence needs at least two terms");
    std::vector<double> x{1.0};
    while (static_cast<int>(x.size()) < count) {
        x.push_back(std::max(ratio * x.back(), x.back() + 3.0));
    }
    return x;
}

PiecewiseLinear build_oscillatory(const PlateauSequence& seq, double theta) {
    seq.validate();
    if (!(seq.beta < theta)) throw InvalidArgument("plateau level beta must be below theta");
    std::vector<double> bp{0.0, 2.0};
    std::vector<double> v{1.0, seq.alpha};
    double level = seq.alpha;
    for (std::size_t k = 1; k < seq.x.size(); ++k) {
        const double next = (k % 2 == 1) ? seq.beta : seq.alpha;
        bp.push_back(seq.x[k] - 1.0);
        v.push_back(level);
        bp.push_back(seq.x[k] + 1.0);
        v.push_back(next);
        level = next;
    }
    return {std::move(bp), std::move(v)};
}

PiecewiseLinear build_front_like(double gamma, double theta) {
    if (!(gamma < theta)) throw InvalidArgument("front-like level gamma must be below theta");
    return {{0.0, 2.0}, {1.0, gamma}};
}

double mean_periodic(const PiecewiseLinear& w0) {
    if (!w0.is_periodic()) throw InvalidArgument("mean_periodic requires a periodic function");
    const double L = *w0.period();
    const double last = w0.breakpoints().back();
    return w0.integral(last - L, last) / L;
}

PiecewiseLinear build_asym_periodic(const PiecewiseLinear& w0, double splice_x, double theta) {
    if (!w0.is_periodic()) throw InvalidArgument("asymptotically periodic data needs periodic w0");
    if (!(splice_x >= 2.0)) throw InvalidArgument("splice position must be at least 2");
    if (!(w0.max_value() < theta)) throw InvalidArgument("periodic far field must stay below theta");
    const double L = *w0.period();
    const double mean = mean_periodic(w0);
    const double bridge_end = splice_x + 1.0;

    std::vector<double> bp{0.0, 2.0};
    std::vector<double> v{1.0, mean};
    if (splice_x > 2.0) {
        bp.push_back(splice_x);
        v.push_back(mean);
    }
    bp.push_back(bridge_end);
    v.push_back(w0(bridge_end));

    // Copy at least one full period of w0 past the bridge, ending on a
    // shifted copy of w0's last breakpoint so the seam is a cell boundary.
    const double w_last = w0.breakpoints().back();
    const double k = std::ceil((bridge_end + L - w_last) / L);
    const double end = w_last + std::max(0.0, k) * L;
    for (const auto& piece : w0.pieces(bridge_end, end)) {
        if (piece.x1 > bp.back()) {
            bp.push_back(piece.x1);
            v.push_back(piece.v1);
        }
    }
    return {std::move(bp), std::move(v), L};
}

Field sample_to_grid(const PiecewiseLinear& pl, const Grid& grid) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = pl(grid.x(i));
    return {grid, std::move(values), 0.0};
}

std::string serialize(const PiecewiseLinear& pl) {
    std::ostringstream out;
    out << "# piecewise-linear function: breakpoint value\n";
    out << "left = " << format_double(pl.left_value()) << '\n';
    if (pl.is_periodic()) {
        out << "right = periodic\n";
        out << "period = " << format_double(*pl.period()) << '\n';
    } else {
        out << "right = " << format_double(pl.right_value()) << '\n';
    }
    for (std::size_t i = 0; i < pl.breakpoints().size(); ++i) {
        out << format_double(pl.breakpoints()[i]) << ' ' << format_double(pl.values()[i]) << '\n';
    }
    return out.str();
}

PiecewiseLinear parse_piecewise_linear(std::string_view text) {
    std::optional<double> left;
    std::optional<double> right;
    std::optional<double> period;
    bool right_periodic = false;
    std::vector<double> bp;
    std::vector<double> v;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_number = 0;
    const auto fail = [&](const std::string& what) {
        throw InvalidArgument("piecewise-linear line " + std::to_string(line_number) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++line_number;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (const auto eq = line.find('='); eq != std::string_view::npos) {
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key == "right" && value == "periodic") {
                right_periodic = true;
                continue;
            }
            const auto number = parse_double(value);
            if (!number) fail("bad number '" + std::string(value) + "'");
            if (key == "left") left = number;
            else if (key == "right") right = number;
            else if (key == "period") period = number;
            else fail("unknown header '" + std::string(key) + "'");
            continue;
        }
        std::string cleaned(line);
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream cols(cleaned);
        std::string a, b, extra;
        cols >> a >> b;
        if (cols >> extra) fail("expected two columns");
        const auto x = parse_double(a);
        const auto y = parse_double(b);
        if (!x || !y) fail("expected two numeric columns");
        bp.push_back(*x);
        v.push_back(*y);
    }
    if (right_periodic != period.has_value()) {
        throw InvalidArgument("'right = periodic' and 'period' must appear together");
    }
    PiecewiseLinear pl(std::move(bp), std::move(v), period);
    if (left && *left != pl.left_value()) {
        throw InvalidArgument("left value disagrees with the first breakpoint value");
    }
    if (right && *right != pl.right_value()) {
        throw InvalidArgument("right value disagrees with the last breakpoint value");
    }
    return pl;
}

}  // namespace spreadlab
