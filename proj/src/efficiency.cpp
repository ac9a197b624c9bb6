#include "coreforge/efficiency.hpp"

#include <algorithm>
#include <cmath>

#include "coreforge/expr.hpp"

namespace coreforge {

std::string subset_key(const mcic& c, const mcic::core& core) {
    std::string out;
    for (std::size_t i : core.members) {
        if (!out.empty()) out += '+';
        out += c.type_names.at(i);
    }
    return out;
}

double estimate_storage(const size_model& model, storage_variant v) {
    double total = 0.0;
    if (v == storage_variant::hc) {
        for (const auto& [type, count] : model.object_counts) {
            auto it = model.hc_type_sizes.find(type);
            if (it == model.hc_type_sizes.end())
                throw missing_size_entry("no homogeneous size for type " + type);
            total += it->second * static_cast<double>(count);
        }
        return total;
    }
    for (const auto& [_, size] : model.core_sizes) total += size;
    for (const auto& [type, count] : model.object_counts) {
        auto it = model.projection_sizes.find(type);
        if (it == model.projection_sizes.end())
            throw missing_size_entry("no projection size for type " + type);
        total += it->second * static_cast<double>(count);
    }
    return total;
}

double efficiency_coefficient(double m_mcic, double m_hc) {
    if (m_hc <= 0.0)
        throw division_by_zero_hc("baseline size must be positive, got " + format_number(m_hc));
    return 100.0 - (m_mcic / m_hc) * 100.0;
}

namespace {

double unit_bytes(const unit& u, std::size_t label_cap) {
    switch (u.kind) {
        case unit_kind::verification_function:
            return 1.0;
        case unit_kind::method: {
            double n = static_cast<double>(expr::print_expression(u.expression).size());
            if (u.result_unit) n += static_cast<double>(u.result_unit->size());
            return n;
        }
        case unit_kind::data_property: {
            double n = 0.0;
            for (component_desc d : u.value_schema) {
                n += 8.0;
                if (d == component_desc::labeled) n += static_cast<double>(label_cap);
            }
            return n;
        }
    }
    return 0.0;
}

template <typename Cost>
size_model build_model(const mcic& c, const std::map<std::string, std::uint64_t>& object_counts,
                       Cost cost) {
    size_model m;
    for (const auto& core : c.cores) {
        double s = 0.0;
        for (const auto& u : core.units) s += cost(u);
        m.core_sizes[subset_key(c, core)] = s;
    }
    for (const auto& name : c.type_names) {
        double proj = 0.0;
        auto pit = c.projections.find(name);
        if (pit != c.projections.end())
            for (const auto& u : pit->second) proj += cost(u);
        m.projection_sizes[name] = proj;

        double whole = proj;
        std::size_t idx = static_cast<std::size_t>(
            std::find(c.type_names.begin(), c.type_names.end(), name) - c.type_names.begin());
        for (const auto& core : c.cores)
            if (std::find(core.members.begin(), core.members.end(), idx) != core.members.end())
                for (const auto& u : core.units) whole += cost(u);
        m.hc_type_sizes[name] = whole;

        auto oit = object_counts.find(name);
        m.object_counts[name] = oit == object_counts.end() ? 0 : oit->second;
    }
    return m;
}

}  // namespace

size_model unit_count_model(const mcic& c, const std::map<std::string, std::uint64_t>& object_counts) {
    return build_model(c, object_counts, [](const unit&) { return 1.0; });
}

size_model column_byte_model(const mcic& c, const std::vector<type_def>& types,
                             const std::map<std::string, std::uint64_t>& object_counts,
                             std::size_t label_cap) {
    size_model m = build_model(c, object_counts,
                               [label_cap](const unit& u) { return unit_bytes(u, label_cap); });
    // Homogeneous sizes come from the original definitions; on a consistent
    // family this matches summing covering cores plus projection.
    for (const auto& t : types) {
        double s = 0.0;
        for (const unit* u : t.all_units()) s += unit_bytes(*u, label_cap);
        m.hc_type_sizes[t.name] = s;
    }
    return m;
}

linear_fit fit_linear(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2)
        throw degenerate_input("a line needs at least 2 points, got " +
                               std::to_string(points.size()));
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw degenerate_input("all points share one x value");

    linear_fit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (const auto& [x, y] : points) {
            double e = y - (fit.slope * x + fit.intercept);
            ss_res += e * e;
        }
        fit.r_squared = 1.0 - ss_res / syy;
        if (fit.r_squared < 0.0) fit.r_squared = 0.0;
        if (fit.r_squared > 1.0) fit.r_squared = 1.0;
    }
    return fit;
}

}  // namespace coreforge
