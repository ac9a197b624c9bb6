#include "coreforge/schema_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "coreforge/expr.hpp"

namespace coreforge {

const type_def& schema_doc::type_named(const std::string& type_name) const {
    for (const auto& t : types)
        if (t.name == type_name) return t;
    throw unknown_type_name("schema " + name + " has no type named " + type_name);
}

// ---------------------------------------------------------------------------
// value tuples:  (90, 90, 90, 90)  |  ((2, "cm"), (2, "cm"))  |  (1)

std::string serialize_value_tuple(const value_tuple& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.components.size(); ++i) {
        if (i) out += ", ";
        const auto& c = v.components[i];
        if (c.unit_label) {
            if (c.unit_label->find('"') != std::string::npos)
                throw error("unit label must not contain a quote: " + *c.unit_label);
            out += "(" + format_number(c.magnitude) + ", \"" + *c.unit_label + "\")";
        } else {
            out += format_number(c.magnitude);
        }
    }
    out += ")";
    return out;
}

namespace {

struct tuple_reader {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c))
            throw error(std::string("expected '") + c + "' at offset " + std::to_string(pos + 1) +
                        " in value tuple");
    }

    double number() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
            ++pos;
        double value = 0.0;
        auto [p, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
        if (ec != std::errc() || p != text.data() + pos || pos == start)
            throw error("bad number at offset " + std::to_string(start + 1) + " in value tuple");
        return value;
    }

    std::string quoted() {
        expect('"');
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '"') ++pos;
        if (pos == text.size()) throw error("unterminated unit label in value tuple");
        std::string s(text.substr(start, pos - start));
        ++pos;
        return s;
    }
};

}  // namespace

value_tuple parse_value_tuple(const std::string& text) {
    tuple_reader r{text};
    r.expect('(');
    value_tuple v;
    r.skip_ws();
    if (!r.eat(')')) {
        while (true) {
            value_tuple::component c;
            r.skip_ws();
            if (r.pos < r.text.size() && r.text[r.pos] == '(') {
                r.expect('(');
                c.magnitude = r.number();
                r.expect(',');
                c.unit_label = r.quoted();
                r.expect(')');
            } else {
                c.magnitude = r.number();
            }
            v.components.push_back(std::move(c));
            if (r.eat(')')) break;
            r.expect(',');
        }
    }
    r.skip_ws();
    if (r.pos != r.text.size())
        throw error("trailing content after value tuple at offset " + std::to_string(r.pos + 1));
    if (v.components.empty()) throw error("value tuple must hold at least one component");
    return v;
}

// ---------------------------------------------------------------------------
// schema documents

namespace {

std::string schema_spec_to_string(const std::vector<component_desc>& schema) {
    std::string out;
    std::size_t i = 0;
    while (i < schema.size()) {
        std::size_t j = i;
        while (j < schema.size() && schema[j] == schema[i]) ++j;
        if (!out.empty()) out += ',';
        out += to_string(schema[i]);
        if (j - i > 1) out += '*' + std::to_string(j - i);
        i = j;
    }
    return out;
}

std::vector<component_desc> schema_spec_from_string(const std::string& text, std::size_t line_no) {
    std::vector<component_desc> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t star = item.find('*');
        std::string base = item.substr(0, star);
        std::size_t reps = 1;
        if (star != std::string::npos) {
            try {
                reps = std::stoul(item.substr(star + 1));
            } catch (const std::exception&) {
                throw schema_format_error("bad repetition count in value schema: " + item, line_no);
            }
            if (reps == 0)
                throw schema_format_error("repetition count must be positive: " + item, line_no);
        }
        component_desc d;
        try {
            d = component_desc_from_string(base);
        } catch (const error& e) {
            throw schema_format_error(e.what(), line_no);
        }
        out.insert(out.end(), reps, d);
    }
    if (out.empty()) throw schema_format_error("empty value schema", line_no);
    return out;
}

std::string unit_line(const unit& u) {
    std::string line;
    switch (u.kind) {
        case unit_kind::data_property:
            line = "prop " + u.name + " " + to_string(u.bind) + " " +
                   schema_spec_to_string(u.value_schema);
            if (u.constant_value) line += " = " + serialize_value_tuple(*u.constant_value);
            break;
        case unit_kind::verification_function:
            line = "vf " + u.name + " expr " + expr::print_expression(u.expression);
            break;
        case unit_kind::method:
            line = "method " + u.name;
            if (u.result_unit) line += " unit \"" + *u.result_unit + "\"";
            line += " expr " + expr::print_expression(u.expression);
            break;
    }
    return line;
}

// First whitespace-separated word; `rest` gets the remainder, trimmed.
std::string take_word(std::string& rest) {
    std::size_t b = rest.find_first_not_of(" \t");
    if (b == std::string::npos) {
        rest.clear();
        return {};
    }
    std::size_t e = rest.find_first_of(" \t", b);
    std::string word = rest.substr(b, e == std::string::npos ? std::string::npos : e - b);
    if (e == std::string::npos)
        rest.clear();
    else {
        std::size_t nb = rest.find_first_not_of(" \t", e);
        rest = nb == std::string::npos ? std::string() : rest.substr(nb);
    }
    return word;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct pending_type {
    std::string name;
    std::size_t line_no = 0;
    std::vector<unit> spec;
    std::vector<unit> sig;
    std::map<std::string, value_tuple> defaults;
};

void flush_type(schema_doc& doc, pending_type& cur) {
    if (cur.name.empty()) return;
    type_def t;
    try {
        t = define_type(cur.name, std::move(cur.spec), std::move(cur.sig));
    } catch (const error& e) {
        throw schema_format_error(std::string(e.what()), cur.line_no);
    }
    for (const auto& [uname, v] : cur.defaults) {
        const unit* u = t.find_unit(uname);
        if (!u)
            throw schema_format_error("default for unknown unit " + uname + " in type " + cur.name,
                                      cur.line_no);
        if (u->bind != binding::instance_level || u->kind != unit_kind::data_property)
            throw schema_format_error("default only applies to instance-level data property: " +
                                          uname,
                                      cur.line_no);
        if (v.arity() != u->value_schema.size())
            throw schema_format_error("default arity does not match schema of " + uname,
                                      cur.line_no);
    }
    doc.defaults[t.name] = std::move(cur.defaults);
    doc.types.push_back(std::move(t));
    cur = {};
}

}  // namespace

schema_doc parse_schema(const std::string& text) {
    schema_doc doc;
    pending_type cur;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::string rest = line;
        std::string head = take_word(rest);

        if (head == "schema") {
            if (!doc.name.empty()) throw schema_format_error("duplicate schema line", line_no);
            doc.name = take_word(rest);
            if (doc.name.empty() || !rest.empty())
                throw schema_format_error("schema line wants exactly one name", line_no);
            continue;
        }
        if (doc.name.empty())
            throw schema_format_error("file must start with a schema line", line_no);

        if (head == "type") {
            flush_type(doc, cur);
            cur.name = take_word(rest);
            cur.line_no = line_no;
            if (cur.name.empty() || !rest.empty())
                throw schema_format_error("type line wants exactly one name", line_no);
            continue;
        }
        if (cur.name.empty())
            throw schema_format_error("unit line outside a type block: " + head, line_no);

        if (head == "prop") {
            unit u;
            u.kind = unit_kind::data_property;
            u.name = take_word(rest);
            std::string bind_word = take_word(rest);
            if (bind_word == "type")
                u.bind = binding::type_level;
            else if (bind_word == "instance")
                u.bind = binding::instance_level;
            else
                throw schema_format_error("property binding must be type or instance, got '" +
                                              bind_word + "'",
                                          line_no);
            u.value_schema = schema_spec_from_string(take_word(rest), line_no);
            if (!rest.empty()) {
                std::string eq = take_word(rest);
                if (eq != "=" || rest.empty())
                    throw schema_format_error("expected '= <tuple>' after value schema", line_no);
                try {
                    u.constant_value = parse_value_tuple(rest);
                } catch (const error& e) {
                    throw schema_format_error(e.what(), line_no);
                }
            }
            cur.spec.push_back(std::move(u));
            continue;
        }
        if (head == "vf" || head == "method") {
            unit u;
            u.kind = head == "vf" ? unit_kind::verification_function : unit_kind::method;
            u.bind = binding::type_level;
            u.value_schema = {component_desc::numeric};
            u.name = take_word(rest);
            std::string kw = take_word(rest);
            if (u.kind == unit_kind::method && kw == "unit") {
                std::string quoted = take_word(rest);
                if (quoted.size() < 2 || quoted.front() != '"' || quoted.back() != '"')
                    throw schema_format_error("result unit wants a quoted label", line_no);
                u.result_unit = quoted.substr(1, quoted.size() - 2);
                kw = take_word(rest);
            }
            if (kw != "expr" || rest.empty())
                throw schema_format_error("expected 'expr <expression>' on " + head + " line",
                                          line_no);
            try {
                u.expression = expr::parse_expression(rest);
            } catch (const expr::parse_error& e) {
                throw schema_format_error(std::string(e.what()) + " (in expression of " + u.name +
                                              ")",
                                          line_no);
            }
            (u.kind == unit_kind::method ? cur.sig : cur.spec).push_back(std::move(u));
            continue;
        }
        if (head == "default") {
            std::string uname = take_word(rest);
            std::string eq = take_word(rest);
            if (uname.empty() || eq != "=" || rest.empty())
                throw schema_format_error("expected 'default <unit> = <tuple>'", line_no);
            value_tuple v;
            try {
                v = parse_value_tuple(rest);
            } catch (const error& e) {
                throw schema_format_error(e.what(), line_no);
            }
            if (!cur.defaults.emplace(uname, std::move(v)).second)
                throw schema_format_error("duplicate default for unit " + uname, line_no);
            continue;
        }
        throw schema_format_error("unknown directive: " + head, line_no);
    }
    flush_type(doc, cur);
    if (doc.name.empty()) throw schema_format_error("empty schema document", line_no ? line_no : 1);
    if (doc.types.empty()) throw schema_format_error("schema defines no types", line_no);
    return doc;
}

schema_doc load_schema(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw error("cannot open schema file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schema(buf.str());
}

std::string serialize_schema(const schema_doc& doc) {
    std::string out = "schema " + doc.name + "\n";
    for (const auto& t : doc.types) {
        out += "\ntype " + t.name + "\n";
        for (const auto& u : t.specification) out += "  " + unit_line(u) + "\n";
        for (const auto& u : t.signature) out += "  " + unit_line(u) + "\n";
        auto dit = doc.defaults.find(t.name);
        if (dit != doc.defaults.end())
            for (const auto& [uname, v] : dit->second)
                out += "  default " + uname + " = " + serialize_value_tuple(v) + "\n";
    }
    return out;
}

std::string serialize_scic(const scic& c) {
    std::string out = "scic " + c.name + "\n";
    out += "types";
    for (const auto& n : c.type_names) out += " " + n;
    out += "\n\ncore\n";
    for (const auto& u : c.core) out += "  " + unit_line(u) + "\n";
    for (const auto& n : c.type_names) {
        out += "\nprojection " + n + "\n";
        auto pit = c.projections.find(n);
        if (pit != c.projections.end())
            for (const auto& u : pit->second) out += "  " + unit_line(u) + "\n";
    }
    return out;
}

std::string serialize_mcic(const mcic& c) {
    std::string out = "mcic " + c.name + "\n";
    out += "types";
    for (const auto& n : c.type_names) out += " " + n;
    out += "\n";
    for (const auto& core : c.cores) {
        out += "\ncore level " + std::to_string(core.level()) + " common";
        for (const auto& n : c.member_names(core)) out += " " + n;
        out += "\n";
        for (const auto& u : core.units) out += "  " + unit_line(u) + "\n";
    }
    for (const auto& n : c.type_names) {
        out += "\nprojection " + n + "\n";
        auto pit = c.projections.find(n);
        if (pit != c.projections.end())
            for (const auto& u : pit->second) out += "  " + unit_line(u) + "\n";
    }
    return out;
}

std::string census_table(const mcic& c) {
    struct row {
        std::string bundle, level, members, units;
    };
    std::vector<row> rows;
    rows.push_back({"bundle", "level", "members", "units"});

    auto join_units = [](const std::vector<unit>& units) {
        std::string s;
        for (const auto& u : units) {
            if (!s.empty()) s += ", ";
            s += u.name;
        }
        return s.empty() ? std::string("-") : s;
    };

    std::size_t n = 0;
    for (const auto& core : c.cores) {
        ++n;
        std::string members;
        for (const auto& name : c.member_names(core)) {
            if (!members.empty()) members += ", ";
            members += name;
        }
        rows.push_back({"core " + std::to_string(n), std::to_string(core.level()), members,
                        join_units(core.units)});
    }
    for (const auto& name : c.type_names) {
        auto pit = c.projections.find(name);
        rows.push_back({"projection", "-", name,
                        pit == c.projections.end() ? "-" : join_units(pit->second)});
    }

    std::size_t w0 = 0, w1 = 0, w2 = 0;
    for (const auto& r : rows) {
        w0 = std::max(w0, r.bundle.size());
        w1 = std::max(w1, r.level.size());
        w2 = std::max(w2, r.members.size());
    }
    std::string out;
    for (const auto& r : rows) {
        out += r.bundle + std::string(w0 - r.bundle.size() + 2, ' ');
        out += r.level + std::string(w1 - r.level.size() + 2, ' ');
        out += r.members + std::string(w2 - r.members.size() + 2, ' ');
        out += r.units + "\n";
    }

    out += "\ncensus:";
    auto census = core_census(c);
    for (auto it = census.rbegin(); it != census.rend(); ++it)
        out += " level " + std::to_string(it->first) + " x" + std::to_string(it->second);
    out += "\n";
    return out;
}

}  // namespace coreforge
