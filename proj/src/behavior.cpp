#include "nlvol/behavior.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nlvol/errors.hpp"

namespace nlvol {

std::uint64_t Scenario::strategy_count() const {
    std::uint64_t count = 1;
    for (int x = 0; x < nx; ++x) count *= static_cast<std::uint64_t>(na);
    for (int y = 0; y < ny; ++y) count *= static_cast<std::uint64_t>(nb);
    return count;
}

Scenario make_scenario(int nx, int ny, int na, int nb) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("scenario: input counts must be >= 1");
    if (na < 2 || nb < 2) throw std::invalid_argument("scenario: outcome counts must be >= 2");
    return Scenario{nx, ny, na, nb};
}

Behavior make_behavior(const Scenario& s) {
    return Behavior{s, std::vector<double>(static_cast<std::size_t>(s.table_size()), 0.0)};
}

std::vector<NoSignallingViolation> check_no_signalling(const Behavior& b, double tol) {
    const Scenario& s = b.scenario;
    std::vector<NoSignallingViolation> out;

    for (int x = 0; x < s.nx; ++x) {
        for (int a = 0; a < s.na; ++a) {
            double lo = 1.0, hi = 0.0;
            for (int y = 0; y < s.ny; ++y) {
                double m = 0.0;
                for (int bb = 0; bb < s.nb; ++bb) m += b.at(x, y, a, bb);
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            if (hi - lo > tol) out.push_back({'A', x, a, hi - lo});
        }
    }
    for (int y = 0; y < s.ny; ++y) {
        for (int bb = 0; bb < s.nb; ++bb) {
            double lo = 1.0, hi = 0.0;
            for (int x = 0; x < s.nx; ++x) {
                double m = 0.0;
                for (int a = 0; a < s.na; ++a) m += b.at(x, y, a, bb);
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            if (hi - lo > tol) out.push_back({'B', y, bb, hi - lo});
        }
    }
    return out;
}

void write_behavior(std::ostream& out, const Behavior& b) {
    const Scenario& s = b.scenario;
    out << "scenario " << s.nx << ' ' << s.ny << ' ' << s.na << ' ' << s.nb << '\n';
    char buf[40];
    for (int x = 0; x < s.nx; ++x)
        for (int y = 0; y < s.ny; ++y)
            for (int a = 0; a < s.na; ++a)
                for (int bb = 0; bb < s.nb; ++bb) {
                    std::snprintf(buf, sizeof buf, "%.17g", b.at(x, y, a, bb));
                    out << x << ' ' << y << ' ' << a << ' ' << bb << ' ' << buf << '\n';
                }
}

Behavior read_behavior(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;
    std::istringstream head(line);
    std::string tag;
    int nx, ny, na, nb;
    if (!(head >> tag >> nx >> ny >> na >> nb) || tag != "scenario")
        throw ParseError("expected header 'scenario nX nY nA nB'", lineno);

    Scenario s;
    try {
        s = make_scenario(nx, ny, na, nb);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
    }

    Behavior b = make_behavior(s);
    std::vector<bool> seen(static_cast<std::size_t>(s.table_size()), false);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        int x, y, a, bb;
        double p;
        if (!(row >> x >> y >> a >> bb >> p))
            throw ParseError("expected 'x y a b p'", lineno);
        if (x < 0 || x >= s.nx || y < 0 || y >= s.ny || a < 0 || a >= s.na || bb < 0 || bb >= s.nb)
            throw ParseError("index out of range for scenario", lineno);
        if (!std::isfinite(p) || p < 0.0)
            throw ParseError("probability must be finite and nonnegative", lineno);
        std::size_t j = static_cast<std::size_t>(s.index(x, y, a, bb));
        if (seen[j]) throw ParseError("duplicate table entry", lineno);
        seen[j] = true;
        b.probs[j] = p;
    }
    for (std::size_t j = 0; j < seen.size(); ++j)
        if (!seen[j]) throw ParseError("table incomplete: missing entries", lineno + 1);
    return b;
}

}  // namespace nlvol
