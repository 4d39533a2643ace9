#include "cellhom/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cellhom/integrand.hpp"

namespace cellhom {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e)
        throw std::runtime_error("bad floating-point value '" + s + "'");
    return v;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    return integrand_id == o.integrand_id && p == o.p && r == o.r && phi == o.phi &&
           xi_mode == o.xi_mode && xi_list == o.xi_list && grid_min == o.grid_min &&
           grid_max == o.grid_max && grid_count == o.grid_count &&
           ray_direction == o.ray_direction && k_list == o.k_list &&
           n_for_k == o.n_for_k && t_list == o.t_list && eps_list == o.eps_list &&
           delta_t == o.delta_t && delta_samples == o.delta_samples && out == o.out &&
           seed == o.seed && jobs == o.jobs &&
           solver.max_iters == o.solver.max_iters &&
           solver.grad_tol == o.solver.grad_tol && solver.armijo == o.solver.armijo &&
           solver.backtrack == o.solver.backtrack &&
           solver.history == o.solver.history &&
           solver.multistart == o.solver.multistart &&
           solver.perturbation == o.solver.perturbation && solver.seed == o.solver.seed;
}

std::vector<Mat2> ExperimentConfig::resolve_xis() const {
    if (xi_mode == "list") return xi_list;
    if (xi_mode == "ray") return {ray_direction};
    if (xi_mode == "grid") {
        std::vector<Mat2> out_xis;
        auto step = [&](int axis, int idx) {
            if (grid_count[axis] <= 1) return grid_min[axis];
            return grid_min[axis] + (grid_max[axis] - grid_min[axis]) * idx /
                                        (grid_count[axis] - 1);
        };
        for (int i0 = 0; i0 < grid_count[0]; ++i0)
            for (int i1 = 0; i1 < grid_count[1]; ++i1)
                for (int i2 = 0; i2 < grid_count[2]; ++i2)
                    for (int i3 = 0; i3 < grid_count[3]; ++i3) {
                        Mat2 xi{step(0, i0), step(1, i1), step(2, i2), step(3, i3)};
                        out_xis.push_back(xi);
                    }
        return out_xis;
    }
    throw std::runtime_error("unknown xi mode '" + xi_mode + "'");
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

std::string mat_to_string(const Mat2& m) {
    return format_double(m.a11) + "," + format_double(m.a12) + "," +
           format_double(m.a21) + "," + format_double(m.a22);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    if (trim(s).empty()) return out;
    for (const auto& p : split(s, ',')) out.push_back(std::stoi(p));
    return out;
}

Mat2 parse_mat(const std::string& s) {
    const auto v = parse_doubles(s);
    if (v.size() != 4) throw std::runtime_error("matrix needs 4 entries, got " + s);
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace

std::string save_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "# cellhom experiment config v1\n";
    os << "[integrand]\n";
    os << "id = " << c.integrand_id << "\n";
    os << "p = " << format_double(c.p) << "\n";
    os << "r = " << format_double(c.r) << "\n";
    os << "phi = " << c.phi << "\n";
    os << "\n[xi]\n";
    os << "mode = " << c.xi_mode << "\n";
    os << "list = ";
    for (std::size_t i = 0; i < c.xi_list.size(); ++i) {
        if (i) os << " ; ";
        os << mat_to_string(c.xi_list[i]);
    }
    os << "\n";
    os << "grid_min = " << format_double(c.grid_min[0]) << ","
       << format_double(c.grid_min[1]) << "," << format_double(c.grid_min[2]) << ","
       << format_double(c.grid_min[3]) << "\n";
    os << "grid_max = " << format_double(c.grid_max[0]) << ","
       << format_double(c.grid_max[1]) << "," << format_double(c.grid_max[2]) << ","
       << format_double(c.grid_max[3]) << "\n";
    os << "grid_count = " << c.grid_count[0] << "," << c.grid_count[1] << ","
       << c.grid_count[2] << "," << c.grid_count[3] << "\n";
    os << "ray = " << mat_to_string(c.ray_direction) << "\n";
    os << "\n[run]\n";
    os << "k_list = " << join_ints(c.k_list) << "\n";
    os << "n_for_k = ";
    {
        bool first = true;
        for (const auto& [k, n] : c.n_for_k) {
            if (!first) os << ",";
            first = false;
            os << k << ":" << n;
        }
    }
    os << "\n";
    os << "t_list = " << join_doubles(c.t_list) << "\n";
    os << "eps_list = " << join_doubles(c.eps_list) << "\n";
    os << "delta_t = " << join_doubles(c.delta_t) << "\n";
    os << "delta_samples = " << c.delta_samples << "\n";
    os << "out = " << c.out << "\n";
    os << "seed = " << c.seed << "\n";
    os << "jobs = " << c.jobs << "\n";
    os << "\n[solver]\n";
    os << "max_iters = " << c.solver.max_iters << "\n";
    os << "grad_tol = " << format_double(c.solver.grad_tol) << "\n";
    os << "armijo = " << format_double(c.solver.armijo) << "\n";
    os << "backtrack = " << format_double(c.solver.backtrack) << "\n";
    os << "history = " << c.solver.history << "\n";
    os << "multistart = " << c.solver.multistart << "\n";
    os << "perturbation = " << format_double(c.solver.perturbation) << "\n";
    os << "solver_seed = " << c.solver.seed << "\n";
    return os.str();
}

void save_config_file(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write config file " + path);
    f << save_config(cfg);
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("config line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail("malformed section header");
            section = t.substr(1, t.size() - 2);
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        try {
            if (section == "integrand") {
                if (key == "id") {
                    if (val != "W" && val != "G" && val != "Phi" && val != "g" &&
                        val != "doublewell")
                        fail("unknown integrand id '" + val + "'");
                    c.integrand_id = val;
                } else if (key == "p") c.p = parse_double(val);
                else if (key == "r") c.r = parse_double(val);
                else if (key == "phi") {
                    if (val != "sine") fail("unknown phi choice '" + val + "'");
                    c.phi = val;
                } else fail("unknown field '" + key + "' in [integrand]");
            } else if (section == "xi") {
                if (key == "mode") c.xi_mode = val;
                else if (key == "list") {
                    c.xi_list.clear();
                    for (const auto& part : split(val, ';'))
                        if (!part.empty()) c.xi_list.push_back(parse_mat(part));
                } else if (key == "grid_min" || key == "grid_max") {
                    const auto v = parse_doubles(val);
                    if (v.size() != 4) fail(key + " needs 4 entries");
                    auto& dst = key == "grid_min" ? c.grid_min : c.grid_max;
                    std::copy(v.begin(), v.end(), dst.begin());
                } else if (key == "grid_count") {
                    const auto v = parse_ints(val);
                    if (v.size() != 4) fail("grid_count needs 4 entries");
                    std::copy(v.begin(), v.end(), c.grid_count.begin());
                } else if (key == "ray") {
                    c.ray_direction = parse_mat(val);
                } else fail("unknown field '" + key + "' in [xi]");
            } else if (section == "run") {
                if (key == "k_list") c.k_list = parse_ints(val);
                else if (key == "n_for_k") {
                    c.n_for_k.clear();
                    for (const auto& part : split(val, ',')) {
                        if (part.empty()) continue;
                        const auto colon = part.find(':');
                        if (colon == std::string::npos) fail("n_for_k entries are k:N");
                        c.n_for_k[std::stoi(part.substr(0, colon))] =
                            std::stoi(part.substr(colon + 1));
                    }
                } else if (key == "t_list") c.t_list = parse_doubles(val);
                else if (key == "eps_list") c.eps_list = parse_doubles(val);
                else if (key == "delta_t") c.delta_t = parse_doubles(val);
                else if (key == "delta_samples") c.delta_samples = std::stoi(val);
                else if (key == "out") c.out = val;
                else if (key == "seed") c.seed = std::stoull(val);
                else if (key == "jobs") c.jobs = std::stoi(val);
                else fail("unknown field '" + key + "' in [run]");
            } else if (section == "solver") {
                if (key == "max_iters") c.solver.max_iters = std::stoi(val);
                else if (key == "grad_tol") c.solver.grad_tol = parse_double(val);
                else if (key == "armijo") c.solver.armijo = parse_double(val);
                else if (key == "backtrack") c.solver.backtrack = parse_double(val);
                else if (key == "history") c.solver.history = std::stoi(val);
                else if (key == "multistart") c.solver.multistart = std::stoi(val);
                else if (key == "perturbation") c.solver.perturbation = parse_double(val);
                else if (key == "solver_seed") c.solver.seed = std::stoull(val);
                else fail("unknown field '" + key + "' in [solver]");
            } else {
                fail("field outside a known section");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            fail(std::string("bad value for '") + key + "': " + e.what());
        }
    }
    if (c.integrand_id != "W" && c.integrand_id != "G" && c.integrand_id != "Phi" &&
        c.integrand_id != "g" && c.integrand_id != "doublewell")
        throw std::runtime_error("config: unknown integrand id '" + c.integrand_id + "'");
    if (c.phi != "sine")
        throw std::runtime_error("config: unknown phi choice '" + c.phi + "'");
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config file " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_config(os.str());
}

}  // namespace cellhom
