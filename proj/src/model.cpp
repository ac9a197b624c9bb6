#include "coreforge/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>

namespace coreforge {

std::string to_string(unit_kind k) {
    switch (k) {
        case unit_kind::data_property: return "prop";
        case unit_kind::verification_function: return "vf";
        case unit_kind::method: return "method";
    }
    return "prop";
}

std::string to_string(binding b) {
    return b == binding::type_level ? "type" : "instance";
}

const unit* type_def::find_unit(std::string_view unit_name) const {
    for (const auto& u : specification)
        if (u.name == unit_name) return &u;
    for (const auto& u : signature)
        if (u.name == unit_name) return &u;
    return nullptr;
}

std::vector<const unit*> type_def::all_units() const {
    std::vector<const unit*> out;
    out.reserve(specification.size() + signature.size());
    for (const auto& u : specification) out.push_back(&u);
    for (const auto& u : signature) out.push_back(&u);
    return out;
}

std::vector<const unit*> type_def::instance_properties() const {
    std::vector<const unit*> out;
    for (const auto& u : specification)
        if (u.kind == unit_kind::data_property && u.bind == binding::instance_level)
            out.push_back(&u);
    return out;
}

namespace {

void check_tuple_against_schema(const value_tuple& v, const std::vector<component_desc>& schema,
                                const std::string& where) {
    if (v.arity() != schema.size())
        throw schema_arity_mismatch(where + ": value arity " + std::to_string(v.arity()) +
                                    " does not match schema arity " +
                                    std::to_string(schema.size()));
    for (std::size_t i = 0; i < schema.size(); ++i) {
        const auto& c = v.components[i];
        switch (schema[i]) {
            case component_desc::labeled:
                if (!c.unit_label)
                    throw schema_arity_mismatch(where + ": component " + std::to_string(i + 1) +
                                                " requires a unit label");
                break;
            case component_desc::numeric:
            case component_desc::angle_degrees:
                if (c.unit_label)
                    throw schema_arity_mismatch(where + ": component " + std::to_string(i + 1) +
                                                " must not carry a unit label");
                if (schema[i] == component_desc::angle_degrees &&
                    (c.magnitude < 0.0 || c.magnitude >= 360.0))
                    throw value_out_of_range(where + ": angle component " + std::to_string(i + 1) +
                                             " outside [0, 360): " + format_number(c.magnitude));
                break;
        }
    }
}

void check_unit_shape(const unit& u) {
    const std::string where = "unit " + u.name;
    if (u.value_schema.empty()) throw schema_arity_mismatch(where + ": empty value schema");
    switch (u.kind) {
        case unit_kind::data_property:
            if (u.expression)
                throw schema_arity_mismatch(where + ": data property must not carry an expression");
            if (u.result_unit)
                throw schema_arity_mismatch(where + ": result unit is only valid on methods");
            if (u.bind == binding::type_level) {
                if (!u.constant_value)
                    throw schema_arity_mismatch(where +
                                                ": type-level data property requires a constant value");
                check_tuple_against_schema(*u.constant_value, u.value_schema, where);
            } else if (u.constant_value) {
                throw schema_arity_mismatch(where +
                                            ": instance-level unit must not carry a constant value");
            }
            break;
        case unit_kind::verification_function:
        case unit_kind::method:
            if (!u.expression) throw schema_arity_mismatch(where + ": missing expression");
            if (u.constant_value)
                throw schema_arity_mismatch(where + ": expression unit must not carry a constant value");
            if (u.value_schema.size() != 1)
                throw schema_arity_mismatch(where + ": expression unit yields a single component");
            if (u.kind == unit_kind::verification_function && u.result_unit)
                throw schema_arity_mismatch(where + ": result unit is only valid on methods");
            break;
    }
}

}  // namespace

type_def define_type(std::string name, std::vector<unit> spec, std::vector<unit> sig) {
    type_def t;
    t.name = std::move(name);
    t.specification = std::move(spec);
    t.signature = std::move(sig);

    std::set<std::string> names;
    for (const unit* u : t.all_units()) {
        if (!names.insert(u->name).second)
            throw duplicate_unit_name("duplicate unit name in type " + t.name + ": " + u->name);
    }
    for (const auto& u : t.signature)
        if (u.kind != unit_kind::method)
            throw schema_arity_mismatch("signature of " + t.name + " holds non-method unit " + u.name);
    for (const auto& u : t.specification)
        if (u.kind == unit_kind::method)
            throw schema_arity_mismatch("specification of " + t.name + " holds method unit " + u.name);

    std::set<std::string> spec_names;
    for (const auto& u : t.specification) spec_names.insert(u.name);

    for (const unit* u : t.all_units()) {
        check_unit_shape(*u);
        if (!u->expression) continue;
        for (const auto& ref : expr::referenced_units(u->expression)) {
            if (!spec_names.count(ref))
                throw dangling_reference("expression of " + u->name + " in type " + t.name +
                                         " references undeclared unit " + ref);
        }
    }

    // Selector references between specification units must not form cycles.
    std::map<std::string, std::vector<std::string>> edges;
    for (const auto& u : t.specification)
        if (u.expression) edges[u.name] = expr::referenced_units(u.expression);
    std::set<std::string> done, active;
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        if (done.count(n)) return;
        if (!active.insert(n).second)
            throw dangling_reference("cyclic unit reference through " + n + " in type " + t.name);
        auto it = edges.find(n);
        if (it != edges.end())
            for (const auto& ref : it->second) visit(ref);
        active.erase(n);
        done.insert(n);
    };
    for (const auto& [n, _] : edges) visit(n);

    return t;
}

bool unit_equivalent(const unit& a, const unit& b) {
    if (a.name != b.name || a.kind != b.kind || a.bind != b.bind) return false;
    if (a.value_schema != b.value_schema) return false;
    if (a.result_unit != b.result_unit) return false;
    if (a.kind == unit_kind::data_property && a.bind == binding::type_level) {
        if (!(a.constant_value == b.constant_value)) return false;
    }
    if (a.expression || b.expression) {
        if (!a.expression || !b.expression) return false;
        if (!(expr::alpha_canonicalize(a.expression) == expr::alpha_canonicalize(b.expression)))
            return false;
    }
    return true;
}

namespace {

// Verification functions resolve to their evaluated 0/1 result, so they can
// be selected like any 1-component property. Results are cached per resolver;
// map node addresses stay valid across later insertions.
struct resolver_state {
    const object_instance* obj;
    const type_def* type;
    std::map<std::string, value_tuple> cache;
    std::set<std::string> active;

    const value_tuple* resolve(std::string_view unit_name) {
        std::string key(unit_name);
        auto vit = obj->values.find(key);
        if (vit != obj->values.end()) return &vit->second;
        auto cit = cache.find(key);
        if (cit != cache.end()) return &cit->second;
        const unit* u = nullptr;
        for (const auto& cand : type->specification)
            if (cand.name == unit_name) {
                u = &cand;
                break;
            }
        if (!u) return nullptr;
        if (u->constant_value) return &*u->constant_value;
        if (u->kind == unit_kind::verification_function && u->expression) {
            if (!active.insert(key).second)
                throw expr::unbound_selector("cyclic reference through unit " + key);
            double r = expr::evaluate_verification(
                u->expression, [this](std::string_view n) { return resolve(n); });
            active.erase(key);
            value_tuple v;
            v.components.push_back({r, std::nullopt});
            auto [it, _] = cache.insert_or_assign(std::move(key), std::move(v));
            return &it->second;
        }
        return nullptr;
    }
};

}  // namespace

expr::selector_resolver make_resolver(const object_instance& obj, const type_def& type) {
    auto st = std::make_shared<resolver_state>();
    st->obj = &obj;
    st->type = &type;
    return [st](std::string_view unit_name) { return st->resolve(unit_name); };
}

double evaluate_unit(const unit& u, const object_instance& obj, const type_def& type) {
    if (!u.expression) throw error("unit " + u.name + " has no expression to evaluate");
    if (u.kind == unit_kind::verification_function)
        return expr::evaluate_verification(u.expression, make_resolver(obj, type));
    return expr::evaluate(u.expression, make_resolver(obj, type));
}

void check_conformance(const object_instance& obj, const type_def& type) {
    if (obj.type_name != type.name)
        throw missing_value("instance of type " + obj.type_name + " checked against " + type.name);
    std::set<std::string> wanted;
    for (const unit* u : type.instance_properties()) {
        wanted.insert(u->name);
        auto it = obj.values.find(u->name);
        if (it == obj.values.end())
            throw missing_value("instance " + std::to_string(obj.object_id) + " lacks value for " +
                                u->name);
        check_tuple_against_schema(it->second, u->value_schema, "value of " + u->name);
    }
    for (const auto& [name, _] : obj.values)
        if (!wanted.count(name))
            throw schema_arity_mismatch("instance carries value for unknown unit " + name);
}

verification_report validate_instance(const object_instance& obj, const type_def& type) {
    check_conformance(obj, type);
    verification_report report;
    report.valid = true;
    for (const auto& u : type.specification) {
        if (u.kind != unit_kind::verification_function) continue;
        double r = evaluate_unit(u, obj, type);
        report.results[u.name] = static_cast<int>(r);
        if (r != 1.0) report.valid = false;
    }
    return report;
}

}  // namespace coreforge
