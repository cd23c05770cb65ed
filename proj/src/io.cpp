#include "ssg/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "ssg/generation.hpp"

namespace ssg {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line.substr(0, line.find('#')));
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::uint64_t to_index(const std::string& s, std::size_t line) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(line, "expected an integer, got '" + s + "'");
    return v;
}

double to_prob(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ParseError(line, "expected a probability, got '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError(line, "expected a probability, got '" + s + "'");
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SsgModel parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::optional<ModelBuilder> builder;
    std::optional<std::uint64_t> initial;
    struct Open {
        StateId state;
        std::string label;
        Distribution dist;
        std::size_t line;
    };
    std::optional<Open> open;
    std::vector<std::uint64_t> goals;

    auto state_id = [&](const std::string& s) {
        const auto v = to_index(s, lineno);
        if (v >= builder->num_states()) throw ParseError(lineno, "state " + s + " out of range");
        return static_cast<StateId>(v);
    };
    auto close_action = [&]() {
        if (!open) return;
        if (open->dist.empty()) throw ParseError(open->line, "action '" + open->label + "' has no transitions");
        builder->add_action(open->state, open->label, std::move(open->dist));
        open.reset();
    };
    auto need_states = [&]() {
        if (!builder) throw ParseError(lineno, "'states' must come first");
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto t = tokens(line);
        if (t.empty()) continue;
        if (!header) {
            if (t.size() != 2 || t[0] != "ssg" || t[1] != "1") throw ParseError(lineno, "expected header 'ssg 1'");
            header = true;
            continue;
        }
        const std::string& key = t[0];
        if (key == "->") {
            if (!open) throw ParseError(lineno, "transition outside of an action");
            if (t.size() != 3) throw ParseError(lineno, "expected '-> TARGET PROB'");
            const auto target = to_index(t[1], lineno);
            // Range is checked by validation so the report names the action.
            open->dist.push_back({static_cast<StateId>(std::min<std::uint64_t>(target, UINT32_MAX)),
                                  to_prob(t[2], lineno)});
            continue;
        }
        close_action();
        if (key == "states") {
            if (builder) throw ParseError(lineno, "duplicate 'states'");
            if (t.size() != 2) throw ParseError(lineno, "expected 'states N'");
            const auto n = to_index(t[1], lineno);
            if (n == 0 || n > UINT32_MAX) throw ParseError(lineno, "state count out of range");
            builder.emplace(n);
        } else if (key == "initial") {
            need_states();
            if (t.size() != 2) throw ParseError(lineno, "expected 'initial I'");
            initial = state_id(t[1]);
        } else if (key == "goal") {
            need_states();
            for (std::size_t i = 1; i < t.size(); ++i) builder->add_goal(state_id(t[i]));
        } else if (key == "minimizer") {
            need_states();
            for (std::size_t i = 1; i < t.size(); ++i) builder->set_owner(state_id(t[i]), Player::Minimizer);
        } else if (key == "action") {
            need_states();
            if (t.size() < 2 || t.size() > 3) throw ParseError(lineno, "expected 'action S [LABEL]'");
            open = Open{state_id(t[1]), t.size() == 3 ? t[2] : std::string("a"), {}, lineno};
        } else {
            throw ParseError(lineno, "unknown keyword '" + key + "'");
        }
    }
    close_action();
    if (!header) throw ParseError(lineno, "missing header 'ssg 1'");
    if (!builder) throw ParseError(lineno, "missing 'states'");
    if (!initial) throw ParseError(lineno, "missing 'initial'");
    builder->set_initial(static_cast<StateId>(*initial));
    SsgModel model = builder->build();
    auto report = validate_model(model);
    if (!report.ok()) throw ModelError(std::move(report));
    return model;
}

std::string serialize_model(const SsgModel& model) {
    std::string out = "ssg 1\nstates " + std::to_string(model.num_states()) + "\ninitial " +
                      std::to_string(model.initial()) + "\ngoal";
    for (StateId g : model.goals()) out += " " + std::to_string(g);
    out += '\n';
    std::string mins;
    for (StateId s = 0; s < model.num_states(); ++s)
        if (!model.is_maximizer(s)) mins += " " + std::to_string(s);
    if (!mins.empty()) out += "minimizer" + mins + '\n';
    for (StateId s = 0; s < model.num_states(); ++s) {
        for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
            out += "action " + std::to_string(s) + ' ' + model.label(s, a) + '\n';
            for (const auto& t : model.transitions(s, a))
                out += "  -> " + std::to_string(t.target) + ' ' + fmt(t.prob) + '\n';
        }
    }
    return out;
}

SsgModel read_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

void write_model_file(const std::string& path, const SsgModel& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << serialize_model(model);
    if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

SsgModel example_game() {
    ModelBuilder b(4);
    b.set_owner(0, Player::Minimizer).set_owner(3, Player::Minimizer);
    b.add_action(0, "a", {{1, 1.0}});
    b.add_action(1, "b", {{0, 1.0}});
    b.add_action(1, "c", {{2, 0.5}, {3, 0.5}});
    b.add_action(2, "d", {{2, 1.0}});
    b.add_action(3, "e", {{3, 1.0}});
    b.set_initial(0).add_goal(2);
    return b.build();
}

SsgModel load_model(const std::string& spec) {
    if (spec == "example") return example_game();
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        std::optional<HandcraftedKind> kind;
        try {
            kind = parse_handcrafted_kind(spec.substr(0, colon));
        } catch (const std::invalid_argument&) {
        }
        if (kind) {
            const auto rest = spec.substr(colon + 1);
            const auto colon2 = rest.find(':');
            const auto n = to_index(rest.substr(0, colon2), 0);
            const auto m = colon2 == std::string::npos ? 1 : to_index(rest.substr(colon2 + 1), 0);
            return handcrafted(*kind, n, m);
        }
    }
    return read_model_file(spec);
}

}  // namespace ssg
