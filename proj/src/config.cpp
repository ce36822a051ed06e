/*
* Copyright (C) 2026 rthome contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "rthome/config.h"
#include "rthome/csv.h"
#include "rthome/error.h"
#include "rthome/operators.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace rthome
{

namespace
{

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"domain", {"a1", "b1", "a2", "b2", "n1", "n2"}},
        {"model", {"gamma", "alpha", "chi", "epsilon", "sigma"}},
        {"homes", {"placement", "count", "seed", "occupancy_min", "occupancy_max", "list"}},
        {"velocity",
         {"kind", "c1", "c2", "m11", "m12", "m21", "m22", "b1", "b2", "omega", "center1", "center2", "kappa",
          "file"}},
        {"circadian",
         {"gamma_profile", "gamma_windows", "gamma_amplitude", "gamma_phase", "chi_profile", "chi_windows",
          "chi_amplitude", "chi_phase"}},
        {"time", {"dt", "t_end", "output_interval", "snapshot_times"}},
        {"output", {"dir"}},
        {"numerics", {"simpson_nodes"}},
    };
    return keys;
}

double to_double(const std::string& text, const std::string& key)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    while (end && *end == ' ') {
        ++end;
    }
    if (text.empty() || end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError(fmt::format("key '{}': expected a number, got '{}'", key, text));
    }
    return v;
}

long to_long(const std::string& text, const std::string& key)
{
    const double v = to_double(text, key);
    if (v != std::floor(v) || std::abs(v) > 9e15) {
        throw ConfigError(fmt::format("key '{}': expected an integer, got '{}'", key, text));
    }
    return static_cast<long>(v);
}

std::vector<double> to_numbers(const std::string& text, const std::string& key)
{
    std::string cleaned = text;
    for (auto& c : cleaned) {
        if (c == ',' || c == ';') {
            c = ' ';
        }
    }
    std::stringstream ss(cleaned);
    std::vector<double> out;
    std::string token;
    while (ss >> token) {
        out.push_back(to_double(token, key));
    }
    return out;
}

// Groups separated by ';', numbers inside a group separated by spaces or ','.
std::vector<std::vector<double>> to_groups(const std::string& text, const std::string& key, std::size_t width)
{
    std::vector<std::vector<double>> out;
    std::stringstream ss(text);
    std::string group;
    while (std::getline(ss, group, ';')) {
        if (group.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        auto values = to_numbers(group, key);
        if (values.size() != width) {
            throw ConfigError(
                fmt::format("key '{}': each ';'-separated entry needs {} numbers, got '{}'", key, width, group));
        }
        out.push_back(std::move(values));
    }
    return out;
}

class Section
{
public:
    Section(const pt::ptree* tree, std::string name)
        : m_tree(tree)
        , m_name(std::move(name))
    {
    }

    std::optional<std::string> text(const std::string& key) const
    {
        if (!m_tree) {
            return std::nullopt;
        }
        auto v = m_tree->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) {
            return std::nullopt;
        }
        auto s = *v;
        s.erase(0, s.find_first_not_of(" \t\""));
        s.erase(s.find_last_not_of(" \t\"") + 1);
        return s;
    }
    std::string qualified(const std::string& key) const
    {
        return m_name + "." + key;
    }
    double number(const std::string& key, double fallback) const
    {
        auto t = text(key);
        return t ? to_double(*t, qualified(key)) : fallback;
    }
    long integer(const std::string& key, long fallback) const
    {
        auto t = text(key);
        return t ? to_long(*t, qualified(key)) : fallback;
    }
    std::string word(const std::string& key, const std::string& fallback) const
    {
        auto t = text(key);
        return t ? *t : fallback;
    }

private:
    const pt::ptree* m_tree;
    std::string m_name;
};

DailyProfile parse_profile(const Section& s, const std::string& prefix)
{
    const auto kind = s.word(prefix + "_profile", "flat");
    if (kind == "flat") {
        return DailyProfile::flat();
    }
    if (kind == "piecewise") {
        std::vector<DailyProfile::Window> windows;
        for (const auto& g : to_groups(s.word(prefix + "_windows", ""), s.qualified(prefix + "_windows"), 3)) {
            windows.push_back({g[0], g[1], g[2]});
        }
        return DailyProfile::piecewise(std::move(windows));
    }
    if (kind == "sinusoidal") {
        return DailyProfile::sinusoidal(s.number(prefix + "_amplitude", 0.0), s.number(prefix + "_phase", 0.0));
    }
    throw ConfigError(fmt::format("key '{}': unknown profile '{}' (flat, piecewise, sinusoidal)",
                                  s.qualified(prefix + "_profile"), kind));
}

VelocitySpec parse_velocity(const Section& s, const std::filesystem::path& base_dir)
{
    VelocitySpec v;
    const auto kind = s.word("kind", "zero");
    if (kind == "zero") {
        v.kind = VelocitySpec::Kind::zero;
    }
    else if (kind == "constant") {
        v.kind = VelocitySpec::Kind::constant;
        v.constant = Vec2(s.number("c1", 0.0), s.number("c2", 0.0));
    }
    else if (kind == "linear") {
        v.kind = VelocitySpec::Kind::linear;
        v.matrix << s.number("m11", 0.0), s.number("m12", 0.0), s.number("m21", 0.0), s.number("m22", 0.0);
        v.offset = Vec2(s.number("b1", 0.0), s.number("b2", 0.0));
    }
    else if (kind == "rotation") {
        v.kind = VelocitySpec::Kind::rotation;
        v.omega = s.number("omega", 0.0);
        v.center = {s.number("center1", 0.5), s.number("center2", 0.5)};
    }
    else if (kind == "radial") {
        v.kind = VelocitySpec::Kind::radial;
        v.kappa = s.number("kappa", 0.0);
    }
    else if (kind == "gridded") {
        v.kind = VelocitySpec::Kind::gridded;
        const auto file = s.word("file", "");
        if (file.empty()) {
            throw ConfigError("key 'velocity.file' is required for kind = gridded");
        }
        v.file = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : base_dir / file;
    }
    else {
        throw ConfigError(fmt::format(
            "key 'velocity.kind': unknown kind '{}' (zero, constant, linear, rotation, radial, gridded)", kind));
    }
    return v;
}

} // namespace

SimulationConfig parse_config(std::istream& in, const std::filesystem::path& base_dir)
{
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
    }

    for (const auto& [name, section] : tree) {
        const auto it = known_keys().find(name);
        if (it == known_keys().end()) {
            throw ConfigError(fmt::format("unknown section or top-level key '{}'", name));
        }
        for (const auto& [key, value] : section) {
            if (!it->second.contains(key)) {
                throw ConfigError(fmt::format("unknown key '{}.{}'", name, key));
            }
        }
    }
    auto section = [&](const std::string& name) {
        auto child = tree.get_child_optional(name);
        return Section(child ? &*child : nullptr, name);
    };

    SimulationConfig c;
    const auto domain = section("domain");
    c.bounds = {domain.number("a1", 0.0), domain.number("b1", 1.0), domain.number("a2", 0.0),
                domain.number("b2", 1.0)};
    c.n1 = static_cast<int>(domain.integer("n1", 50));
    c.n2 = static_cast<int>(domain.integer("n2", 50));

    const auto model = section("model");
    c.params.gamma = model.number("gamma", c.params.gamma);
    c.params.alpha = model.number("alpha", c.params.alpha);
    c.params.chi = model.number("chi", c.params.chi);
    c.params.epsilon = model.number("epsilon", c.params.epsilon);
    c.params.sigma = model.number("sigma", c.params.sigma);

    const auto homes = section("homes");
    const auto placement = homes.word("placement", "random");
    if (placement == "random") {
        c.placement.mode = HomePlacement::Mode::random;
        c.placement.count = homes.integer("count", c.placement.count);
        const long seed = homes.integer("seed", 1);
        if (seed < 0) {
            throw ConfigError(fmt::format("key 'homes.seed': must be nonnegative, got {}", seed));
        }
        c.placement.seed = static_cast<std::uint64_t>(seed);
        c.placement.occupancy_min = homes.integer("occupancy_min", c.placement.occupancy_min);
        c.placement.occupancy_max = homes.integer("occupancy_max", c.placement.occupancy_max);
    }
    else if (placement == "explicit") {
        c.placement.mode = HomePlacement::Mode::explicit_list;
        for (const auto& g : to_groups(homes.word("list", ""), "homes.list", 3)) {
            c.placement.listed.push_back({{g[0], g[1]}, g[2], 0});
        }
    }
    else {
        throw ConfigError(fmt::format("key 'homes.placement': unknown mode '{}' (random, explicit)", placement));
    }

    c.velocity = parse_velocity(section("velocity"), base_dir);

    const auto circadian = section("circadian");
    c.schedule.gamma = parse_profile(circadian, "gamma");
    c.schedule.chi = parse_profile(circadian, "chi");

    const auto time = section("time");
    c.run.dt = time.number("dt", c.run.dt);
    c.run.t_end = time.number("t_end", c.run.t_end);
    c.run.output_interval = time.number("output_interval", c.run.output_interval);
    if (auto t = time.text("snapshot_times")) {
        c.run.snapshot_times = to_numbers(*t, "time.snapshot_times");
    }

    c.output_dir = section("output").word("dir", c.output_dir.string());
    c.simpson_nodes = static_cast<int>(section("numerics").integer("simpson_nodes", 0));
    return c;
}

std::vector<Home> place_random_homes(const Bounds& bounds, long count, std::uint64_t seed, long occupancy_min,
                                     long occupancy_max)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> x1(bounds.a1, bounds.b1);
    std::uniform_real_distribution<double> x2(bounds.a2, bounds.b2);
    std::uniform_int_distribution<long> occupancy(occupancy_min, occupancy_max);
    std::vector<Home> homes;
    homes.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) {
        Home h;
        h.location.x1 = x1(rng);
        h.location.x2 = x2(rng);
        h.occupancy = static_cast<double>(occupancy(rng));
        homes.push_back(h);
    }
    return homes;
}

namespace
{

VelocityField read_gridded_velocity(const std::filesystem::path& file, const Grid& grid)
{
    const auto table = read_csv(file);
    if (table.rows.size() != grid.size()) {
        throw ConfigError(fmt::format("gridded velocity '{}' has {} rows, grid has {} cells", file.string(),
                                      table.rows.size(), grid.size()));
    }
    const auto cm = table.column("m"), c1 = table.column("c1"), c2 = table.column("c2");
    Field v1 = grid.zeros(), v2 = grid.zeros();
    for (const auto& row : table.rows) {
        const long m = to_long(row[cm], "m");
        if (m < 1 || static_cast<std::size_t>(m) > grid.size()) {
            throw ConfigError(fmt::format("gridded velocity '{}': index m = {} out of range", file.string(), m));
        }
        v1[m - 1] = to_double(row[c1], "c1");
        v2[m - 1] = to_double(row[c2], "c2");
    }
    return VelocityField::gridded(grid, std::move(v1), std::move(v2));
}

} // namespace

void finalize_config(SimulationConfig& c)
{
    const Grid grid = c.grid();
    c.params.validate_positive_rates();
    if (c.simpson_nodes != 0 && (c.simpson_nodes < 3 || c.simpson_nodes % 2 == 0)) {
        throw ConfigError(fmt::format("key 'numerics.simpson_nodes': need an odd count >= 3 or 0, got {}",
                                      c.simpson_nodes));
    }

    if (c.placement.mode == HomePlacement::Mode::random) {
        if (c.placement.count < 1) {
            throw ConfigError(fmt::format("key 'homes.count': need at least one home, got {}", c.placement.count));
        }
        if (c.placement.occupancy_min < 1 || c.placement.occupancy_max < c.placement.occupancy_min) {
            throw ConfigError(fmt::format("occupancy range [{}, {}] is invalid", c.placement.occupancy_min,
                                          c.placement.occupancy_max));
        }
        c.homes = place_random_homes(c.bounds, c.placement.count, c.placement.seed, c.placement.occupancy_min,
                                     c.placement.occupancy_max);
    }
    else {
        if (c.placement.listed.empty()) {
            throw ConfigError("key 'homes.list': explicit placement needs at least one home");
        }
        c.homes = c.placement.listed;
    }
    for (std::size_t i = 0; i < c.homes.size(); ++i) {
        const auto& h = c.homes[i];
        if (!grid.contains(h.location)) {
            throw ConfigError(
                fmt::format("home {} at ({}, {}) lies outside the domain", i, h.location.x1, h.location.x2));
        }
        if (!(h.occupancy > 0.0)) {
            throw ConfigError(fmt::format("home {} has nonpositive occupancy {}", i, h.occupancy));
        }
    }

    c.velocities.clear();
    const auto& v = c.velocity;
    switch (v.kind) {
    case VelocitySpec::Kind::zero:
        c.velocities.push_back(VelocityField::zero());
        break;
    case VelocitySpec::Kind::constant:
        c.velocities.push_back(VelocityField::constant(v.constant));
        break;
    case VelocitySpec::Kind::linear:
        c.velocities.push_back(VelocityField::linear(v.matrix, v.offset));
        break;
    case VelocitySpec::Kind::rotation:
        c.velocities.push_back(VelocityField::rotation(v.omega, v.center));
        break;
    case VelocitySpec::Kind::gridded:
        c.velocities.push_back(read_gridded_velocity(v.file, grid));
        break;
    case VelocitySpec::Kind::radial:
        for (auto& h : c.homes) {
            const Mat2 m = v.kappa * Mat2::Identity();
            c.velocities.push_back(VelocityField::linear(m, -v.kappa * Vec2(h.location.x1, h.location.x2)));
        }
        break;
    }
    for (std::size_t i = 0; i < c.homes.size(); ++i) {
        c.homes[i].velocity = v.kind == VelocitySpec::Kind::radial ? i : 0;
    }

    if (!(c.run.dt > 0.0)) {
        throw ConfigError(fmt::format("key 'time.dt': must be positive, got {}", c.run.dt));
    }
    const double rate_limit = rate_step_limit(c.params, c.schedule);
    if (c.run.dt > rate_limit) {
        throw ConfigError(fmt::format("key 'time.dt': {} exceeds the explicit rate bound 0.5 / max(gamma, alpha, chi) = {}",
                                      c.run.dt, rate_limit));
    }
    for (std::size_t k = 0; k < c.velocities.size(); ++k) {
        const double cfl = convection_step_limit(build_convection(grid, c.velocities[k]));
        if (c.run.dt > cfl) {
            throw ConfigError(
                fmt::format("key 'time.dt': {} violates the CFL bound {} of velocity field {}", c.run.dt, cfl, k));
        }
    }
    const long steps = std::lround(c.run.t_end / c.run.dt);
    if (!(c.run.t_end > 0.0) || steps < 1 ||
        std::abs(static_cast<double>(steps) * c.run.dt - c.run.t_end) > 1e-9 * std::max(1.0, c.run.t_end)) {
        throw ConfigError(fmt::format("key 'time.t_end': {} must be a positive multiple of dt = {}", c.run.t_end,
                                      c.run.dt));
    }
    if (!(c.run.output_interval > 0.0)) {
        throw ConfigError(fmt::format("key 'time.output_interval': must be positive, got {}", c.run.output_interval));
    }
    for (double ts : c.run.snapshot_times) {
        if (!(ts >= 0.0 && ts <= c.run.t_end + 0.5 * c.run.dt)) {
            throw ConfigError(
                fmt::format("key 'time.snapshot_times': {} lies outside [0, {}]", ts, c.run.t_end));
        }
    }
}

SimulationConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open config '{}'", path.string()));
    }
    SimulationConfig c;
    try {
        c = parse_config(in, path.parent_path());
    }
    catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
    finalize_config(c);
    return c;
}

} // namespace rthome
