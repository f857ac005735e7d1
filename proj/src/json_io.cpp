#include "prophetlab/json_io.hpp"
#include "prophetlab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace prophetlab {

using nlohmann::json;

namespace {

Distribution parse_variable(const json& var, int index, int param_grid) {
    std::string where = "variable " + std::to_string(index);
    if (!var.is_object()) throw domain_error(where + ": expected an object");
    std::string label = var.value("label", std::string{});

    int kinds = (var.contains("atoms") ? 1 : 0) + (var.contains("uniform") ? 1 : 0) +
                (var.contains("exponential") ? 1 : 0);
    if (kinds != 1)
        throw domain_error(where + ": exactly one of atoms/uniform/exponential required");

    if (var.contains("uniform")) {
        const json& u = var["uniform"];
        if (!u.is_array() || u.size() != 2)
            throw domain_error(where + ": uniform wants [a, b]");
        return Distribution::uniform(u[0].get<double>(), u[1].get<double>(), label)
            .discretized(param_grid);
    }
    if (var.contains("exponential")) {
        const json& e = var["exponential"];
        if (!e.is_array() || e.size() != 1)
            throw domain_error(where + ": exponential wants [rate]");
        return Distribution::exponential(e[0].get<double>(), label).discretized(param_grid);
    }

    const json& atoms = var["atoms"];
    if (!atoms.is_array() || atoms.empty())
        throw domain_error(where + ": atoms must be a non-empty array");
    std::vector<double> values, masses;
    values.reserve(atoms.size());
    masses.reserve(atoms.size());
    double sum = 0.0;
    for (const json& a : atoms) {
        if (!a.is_array() || a.size() != 2)
            throw domain_error(where + ": each atom is [value, mass]");
        double v = a[0].get<double>(), m = a[1].get<double>();
        if (v < 0.0) throw domain_error(where + ": negative atom value");
        if (m <= 0.0) throw domain_error(where + ": atom mass must be positive");
        values.push_back(v);
        masses.push_back(m);
        sum += m;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw domain_error(where + ": masses sum to " + std::to_string(sum) +
                           ", expected 1");
    return Distribution::discrete(std::move(values), std::move(masses), label);
}

} // namespace

Instance parse_instance_json(const json& doc, int param_grid) {
    if (!doc.is_object() || !doc.contains("variables"))
        throw domain_error("instance JSON must contain a 'variables' array");
    const json& vars = doc["variables"];
    if (!vars.is_array() || vars.empty())
        throw domain_error("'variables' must be a non-empty array");
    std::vector<Distribution> ds;
    ds.reserve(vars.size());
    for (size_t i = 0; i < vars.size(); ++i)
        ds.push_back(parse_variable(vars[i], static_cast<int>(i), param_grid));
    return Instance(std::move(ds));
}

Instance parse_instance_text(const std::string& text, int param_grid) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw domain_error(std::string("instance parse error: ") + e.what());
    }
    return parse_instance_json(doc, param_grid);
}

Instance parse_instance_file(const std::string& path, int param_grid) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance_text(buf.str(), param_grid);
}

json instance_to_json(const Instance& inst) {
    json vars = json::array();
    for (const auto& d : inst.variables()) {
        json var = json::object();
        if (!d.label().empty()) var["label"] = d.label();
        switch (d.kind()) {
        case Distribution::Kind::Discrete: {
            json atoms = json::array();
            for (size_t j = 0; j < d.atom_count(); ++j)
                atoms.push_back(json::array({d.values()[j], d.masses()[j]}));
            var["atoms"] = std::move(atoms);
            break;
        }
        case Distribution::Kind::Uniform:
            var["uniform"] = json::array({d.param_a(), d.param_b()});
            break;
        case Distribution::Kind::Exponential:
            var["exponential"] = json::array({d.param_a()});
            break;
        }
        vars.push_back(std::move(var));
    }
    return json{{"variables", std::move(vars)}};
}

void write_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write instance file: " + path);
    out << instance_to_json(inst).dump(2) << "\n";
    if (!out) throw io_error("write failed: " + path);
}

namespace {

void format_double(std::string& out, double x) {
    if (std::isnan(x)) {
        out += "null";
        return;
    }
    if (std::isinf(x)) {
        out += x > 0 ? "1e999" : "-1e999";
        return;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    out += buf;
    // keep a float marker so round-trips stay floats
    if (!std::strpbrk(buf, ".eE")) out += ".0";
}

void canonical_dump(const json& node, std::string& out) {
    switch (node.type()) {
    case json::value_t::object: {
        out += '{';
        bool first = true;
        for (auto it = node.begin(); it != node.end(); ++it) { // nlohmann sorts keys
            if (!first) out += ',';
            first = false;
            out += json(it.key()).dump();
            out += ':';
            canonical_dump(it.value(), out);
        }
        out += '}';
        break;
    }
    case json::value_t::array: {
        out += '[';
        for (size_t i = 0; i < node.size(); ++i) {
            if (i) out += ',';
            canonical_dump(node[i], out);
        }
        out += ']';
        break;
    }
    case json::value_t::number_float:
        format_double(out, node.get<double>());
        break;
    default:
        out += node.dump();
    }
}

} // namespace

std::string canonical_json(const json& doc) {
    std::string out;
    canonical_dump(doc, out);
    return out;
}

std::string report_to_string(const Report& report) {
    json doc;
    doc["command"] = report.command;
    doc["inputs"] = report.inputs;
    doc["results"] = report.results;
    doc["flags"] = report.flags;
    doc["version"] = kVersion;
    return canonical_json(doc) + "\n";
}

void emit_report(const Report& report, const std::string& path) {
    std::string text = report_to_string(report);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw io_error("cannot write report: " + path);
    out << text;
    if (!out) throw io_error("write failed: " + path);
}

} // namespace prophetlab
