#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "paq/automaton.hpp"

namespace paq {

/// A parsed automaton document: name, automaton, and the source line of each
/// (sorted) transition for diagnostics.
struct PaDocument {
    std::string name;
    Automaton automaton;
    std::map<size_t, int> transition_lines; // index into automaton.transitions()
};

namespace detail {

struct Token {
    std::string text;
    int col; // 1-based
};

inline std::vector<Token> tokenize_line(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '{' || c == '}' || c == ':' || c == ',') {
            out.push_back({std::string(1, c), int(i) + 1});
            ++i;
            continue;
        }
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '{' &&
               line[i] != '}' && line[i] != ':' && line[i] != ',' && line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), int(start) + 1});
    }
    return out;
}

inline bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

inline StateId parse_state_id(const Token& tok, int line) {
    for (char c : tok.text)
        if (c < '0' || c > '9')
            throw SyntaxError("expected state id, got '" + tok.text + "'", line, tok.col);
    try {
        unsigned long v = std::stoul(tok.text);
        if (v > 0xffffffffUL)
            throw SyntaxError("state id '" + tok.text + "' out of range", line, tok.col);
        return static_cast<StateId>(v);
    } catch (const std::out_of_range&) {
        throw SyntaxError("state id '" + tok.text + "' out of range", line, tok.col);
    } catch (const std::invalid_argument&) {
        throw SyntaxError("expected state id, got '" + tok.text + "'", line, tok.col);
    }
}

} // namespace detail

/// Parses the line-based automaton format:
///
///   pa <name>
///   states: <id>+
///   init: <id>
///   actions: tau <id>*
///   trans <src> <action> { <state>: <p/q>, ... }
///
/// `#` starts a comment, CRLF is accepted, probabilities are exact rationals
/// summing to exactly 1 per transition.
inline PaDocument parse(const std::string& text) {
    std::vector<std::pair<int, std::vector<detail::Token>>> lines;
    {
        std::istringstream in(text);
        std::string raw;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            auto tokens = detail::tokenize_line(raw);
            if (!tokens.empty()) lines.emplace_back(number, std::move(tokens));
        }
    }
    size_t cursor = 0;
    auto need_line = [&](const std::string& what) -> std::pair<int, std::vector<detail::Token>>& {
        if (cursor >= lines.size())
            throw SyntaxError("missing " + what, lines.empty() ? 1 : lines.back().first + 1);
        return lines[cursor];
    };

    PaDocument doc;

    {
        auto& [ln, toks] = need_line("'pa <name>' header");
        if (toks.size() != 2 || toks[0].text != "pa" || !detail::is_identifier(toks[1].text))
            throw SyntaxError("expected 'pa <name>'", ln, toks[0].col);
        doc.name = toks[1].text;
        ++cursor;
    }

    std::set<StateId> states;
    {
        auto& [ln, toks] = need_line("'states:' line");
        if (toks.size() < 3 || toks[0].text != "states" || toks[1].text != ":")
            throw SyntaxError("expected 'states: <id>+'", ln, toks.empty() ? 1 : toks[0].col);
        for (size_t i = 2; i < toks.size(); ++i) {
            StateId s = detail::parse_state_id(toks[i], ln);
            if (!states.insert(s).second)
                throw SyntaxError("state " + std::to_string(s) + " declared twice", ln, toks[i].col);
        }
        ++cursor;
    }

    StateId initial;
    {
        auto& [ln, toks] = need_line("'init:' line");
        if (toks.size() != 3 || toks[0].text != "init" || toks[1].text != ":")
            throw SyntaxError("expected 'init: <id>'", ln, toks.empty() ? 1 : toks[0].col);
        initial = detail::parse_state_id(toks[2], ln);
        if (!states.count(initial))
            throw UnknownState("initial state " + std::to_string(initial) + " not declared", ln);
        ++cursor;
    }

    std::set<ActionId> actions;
    {
        auto& [ln, toks] = need_line("'actions:' line");
        if (toks.size() < 3 || toks[0].text != "actions" || toks[1].text != ":")
            throw SyntaxError("expected 'actions: tau <id>*'", ln, toks.empty() ? 1 : toks[0].col);
        if (toks[2].text != kTau)
            throw SyntaxError("the hidden action 'tau' must be declared first", ln, toks[2].col);
        for (size_t i = 2; i < toks.size(); ++i) {
            if (!detail::is_identifier(toks[i].text))
                throw SyntaxError("invalid action name '" + toks[i].text + "'", ln, toks[i].col);
            if (!actions.insert(toks[i].text).second)
                throw SyntaxError("action '" + toks[i].text + "' declared twice", ln, toks[i].col);
        }
        ++cursor;
    }

    std::vector<Transition> transitions;
    std::vector<int> trans_lines;
    for (; cursor < lines.size(); ++cursor) {
        auto& [ln, toks] = lines[cursor];
        if (toks[0].text != "trans")
            throw SyntaxError("expected 'trans <src> <action> { ... }', got '" + toks[0].text + "'",
                              ln, toks[0].col);
        size_t i = 1;
        auto need = [&](const char* what) -> const detail::Token& {
            if (i >= toks.size()) throw SyntaxError(std::string("expected ") + what, ln,
                                                    toks.back().col + int(toks.back().text.size()));
            return toks[i];
        };
        StateId src = detail::parse_state_id(need("source state"), ln);
        if (!states.count(src))
            throw UnknownState("source state " + std::to_string(src) + " not declared", ln);
        ++i;
        const auto& act = need("action");
        if (!actions.count(act.text))
            throw UnknownAction("action '" + act.text + "' not declared", ln);
        ActionId action = act.text;
        ++i;
        if (need("'{'").text != "{") throw SyntaxError("expected '{'", ln, toks[i].col);
        ++i;
        std::vector<std::pair<StateId, Rat>> entries;
        Rat mass(0);
        bool first = true;
        while (need("'}'").text != "}") {
            if (!first) {
                if (toks[i].text != ",") throw SyntaxError("expected ','", ln, toks[i].col);
                ++i;
            }
            first = false;
            StateId target = detail::parse_state_id(need("target state"), ln);
            if (!states.count(target))
                throw UnknownState("target state " + std::to_string(target) + " not declared", ln);
            ++i;
            if (need("':'").text != ":") throw SyntaxError("expected ':'", ln, toks[i].col);
            ++i;
            const auto& ptok = need("probability");
            Rat p = parse_rat(ptok.text, ln, ptok.col);
            for (const auto& [s, q] : entries)
                if (s == target)
                    throw SyntaxError("state " + std::to_string(target) +
                                          " repeated in distribution",
                                      ln, toks[i].col);
            entries.emplace_back(target, p);
            mass += p;
            ++i;
        }
        ++i;
        if (i != toks.size())
            throw SyntaxError("unexpected trailing '" + toks[i].text + "'", ln, toks[i].col);
        if (mass != 1)
            throw MassNotOne("transition distribution has mass " + rat_str(mass) +
                                 ", expected exactly 1",
                             ln);
        transitions.push_back({src, action, SubDist::make(entries)});
        trans_lines.push_back(ln);
    }

    doc.automaton = Automaton(std::move(states), std::move(actions), transitions, initial);
    for (size_t k = 0; k < transitions.size(); ++k) {
        const auto& sorted = doc.automaton.transitions();
        auto it = std::lower_bound(sorted.begin(), sorted.end(), transitions[k]);
        if (it != sorted.end() && *it == transitions[k])
            doc.transition_lines.emplace(size_t(it - sorted.begin()), trans_lines[k]);
    }
    return doc;
}

/// Canonical text form: states ascending, actions with tau first then sorted,
/// transitions in canonical order, probabilities as reduced fractions.
/// parse(serialize(d)) reproduces d's automaton exactly.
inline std::string serialize(const PaDocument& doc) {
    std::ostringstream out;
    out << "pa " << doc.name << "\n";
    out << "states:";
    for (StateId s : doc.automaton.states()) out << " " << s;
    out << "\n";
    out << "init: " << doc.automaton.initial() << "\n";
    out << "actions: " << kTau;
    for (const auto& a : doc.automaton.actions())
        if (a != kTau) out << " " << a;
    out << "\n";
    for (const auto& t : doc.automaton.transitions()) {
        out << "trans " << t.source << " " << t.action << " {";
        bool first = true;
        for (const auto& [s, p] : t.target.weights()) {
            out << (first ? "" : ", ") << s << ": " << rat_str(p);
            first = false;
        }
        out << "}\n";
    }
    return out.str();
}

/// GraphViz rendering: states as circles (the initial one doubled), each
/// transition as an action-labelled box with probability-labelled edges to
/// the target states.
inline std::string export_dot(const Automaton& p) {
    std::ostringstream out;
    out << "digraph pa {\n";
    out << "  rankdir=LR;\n";
    for (StateId s : p.states()) {
        out << "  s" << s << " [label=\"" << s << "\", shape="
            << (s == p.initial() ? "doublecircle" : "circle") << "];\n";
    }
    size_t idx = 0;
    for (const auto& t : p.transitions()) {
        out << "  t" << idx << " [label=\"" << t.action << "\", shape=box];\n";
        out << "  s" << t.source << " -> t" << idx << ";\n";
        for (const auto& [s, prob] : t.target.weights())
            out << "  t" << idx << " -> s" << s << " [label=\"" << rat_str(prob) << "\"];\n";
        ++idx;
    }
    out << "}\n";
    return out.str();
}

} // namespace paq
