#include "padic_lab/generators.hpp"

#include "padic/errors.hpp"
#include "padic/vladimirov.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace padic::lab {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

GridFunction random_real(const BallGrid& grid, std::mt19937_64& rng, double amplitude) {
    std::normal_distribution<double> n;
    GridFunction f(grid);
    for (std::int64_t a = 0; a < grid.size(); ++a) f[a] = amplitude * n(rng);
    return f;
}

GridFunction random_complex(const BallGrid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    GridFunction f(grid);
    for (std::int64_t a = 0; a < grid.size(); ++a) {
        const double re = n(rng);
        f[a] = Complex{re, n(rng)};
    }
    return f;
}

namespace {

GridFunction read_file(const std::filesystem::path& path, const BallGrid& grid) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError(path.string() + ": cannot open initial-condition file");
    GridFunction f(grid);
    std::vector<bool> seen(static_cast<std::size_t>(grid.size()), false);
    std::int64_t next = 0;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        std::int64_t a = next;
        double value = 0.0;
        try {
            std::size_t used = 0;
            if (tok.size() == 1) {
                value = std::stod(tok[0], &used);
                if (used != tok[0].size()) throw std::invalid_argument("trailing characters");
            } else if (tok.size() == 2) {
                a = std::stoll(tok[0], &used);
                if (used != tok[0].size()) throw std::invalid_argument("trailing characters");
                value = std::stod(tok[1], &used);
                if (used != tok[1].size()) throw std::invalid_argument("trailing characters");
            } else {
                throw std::invalid_argument("bad field count");
            }
        } catch (const std::exception&) {
            // A header line is allowed before the first value.
            if (next == 0 && lineno == 1) continue;
            throw ConfigurationError(where + "expected 'value' or 'index,value'");
        }
        if (a < 0 || a >= grid.size()) {
            throw ConfigurationError(where + "cell index " + std::to_string(a) + " outside [0, " +
                                     std::to_string(grid.size()) + ")");
        }
        if (seen[static_cast<std::size_t>(a)]) throw ConfigurationError(where + "cell " + std::to_string(a) + " given twice");
        if (!std::isfinite(value)) throw ConfigurationError(where + "value is not finite");
        seen[static_cast<std::size_t>(a)] = true;
        f[a] = value;
        next = a + 1;
    }
    for (std::int64_t a = 0; a < grid.size(); ++a) {
        if (!seen[static_cast<std::size_t>(a)]) {
            throw ConfigurationError(path.string() + ": no value for cell " + std::to_string(a) + " (need " +
                                     std::to_string(grid.size()) + " cells)");
        }
    }
    return f;
}

}  // namespace

GridFunction make_initial(const InitialSpec& spec, const BallGrid& grid, std::uint64_t seed,
                          const std::filesystem::path& base_dir) {
    const std::string& g = spec.generator;
    GridFunction f(grid);
    if (g == "psi0") {
        f = eigenfunction_psi0(grid);
    } else if (g == "random") {
        auto rng = make_rng(seed, 0x1417);
        f = random_real(grid, rng);
    } else if (g == "indicator") {
        const double r = pow_p(grid.prime(), spec.radius);
        for (std::int64_t a = 0; a < grid.size(); ++a) f[a] = grid.point_abs({a}) <= r * (1 + 1e-12) ? 1.0 : 0.0;
    } else if (g.rfind("character:", 0) == 0) {
        const std::int64_t b = std::stoll(g.substr(10));
        if (b < 0 || b >= grid.size()) throw ConfigurationError("character class outside the grid");
        for (std::int64_t a = 0; a < grid.size(); ++a) f[a] = grid.character({a}, {b}).real();
    } else if (g == "file") {
        std::filesystem::path path(spec.path);
        if (path.is_relative()) path = base_dir / path;
        f = read_file(path, grid);
    } else {
        throw ConfigurationError("unknown generator '" + g + "'");
    }
    f *= spec.amplitude;
    return f;
}

}  // namespace padic::lab
