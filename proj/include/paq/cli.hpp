#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paq/format.hpp"
#include "paq/lattice.hpp"

namespace paq {

namespace detail {

inline PaDocument load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }
}

inline BisimKind parse_kind(const std::string& kind) {
    return kind == "strong" ? BisimKind::strong : BisimKind::weak;
}

/// Renders the witness partition of a bisimilarity check with file-qualified
/// state names.
inline std::string render_union_partition(const Partition& part, const PaDocument& d1,
                                          const PaDocument& d2, const DisjointUnion& du) {
    std::map<StateId, std::string> names;
    for (const auto& [s, u] : du.inj1) names[u] = d1.name + "." + std::to_string(s);
    for (const auto& [s, u] : du.inj2) names[u] = d2.name + "." + std::to_string(s);
    std::ostringstream out;
    for (const auto& block : part.blocks()) {
        out << "{";
        for (size_t i = 0; i < block.size(); ++i) out << (i ? ", " : "") << names.at(block[i]);
        out << "}\n";
    }
    return out.str();
}

} // namespace detail

/// Command-line entry point, factored out of main() so the whole surface is
/// testable in-process. Returns the process exit code: 0 for success (and
/// positive decisions), 1 for negative decisions, 2 for any error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"probabilistic automata: bisimulation, quotients, lattice operations, normal forms"};
    app.require_subcommand(1);

    std::string kind;
    std::vector<std::string> files;
    int exit_code = 0;

    auto add_kind = [&kind](CLI::App* sub) {
        sub->add_option("--kind", kind, "bisimulation kind")
            ->required()
            ->check(CLI::IsMember({"strong", "weak"}));
    };

    auto* check = app.add_subcommand("check-bisim", "decide bisimilarity of two automata");
    add_kind(check);
    check->add_option("files", files, "two .pa files")->expected(2);
    check->callback([&] {
        auto a = detail::load_document(files[0]);
        auto b = detail::load_document(files[1]);
        auto decision = bisimilar(a.automaton, b.automaton, detail::parse_kind(kind));
        out << (decision.related ? "bisimilar" : "not bisimilar") << "\n";
        out << detail::render_union_partition(decision.partition, a, b, decision.du);
        exit_code = decision.related ? 0 : 1;
    });

    auto* quot = app.add_subcommand("quotient", "quotient by the coarsest bisimulation");
    add_kind(quot);
    quot->add_option("files", files, "one .pa file")->expected(1);
    quot->callback([&] {
        auto d = detail::load_document(files[0]);
        auto part = coarsest_partition(d.automaton, detail::parse_kind(kind)).partition;
        out << serialize({"quotient", quotient(d.automaton, part), {}});
    });

    auto* resc = app.add_subcommand("rescale", "redistribute fractional tau self-loop mass");
    resc->add_option("files", files, "one .pa file")->expected(1);
    resc->callback([&] {
        auto d = detail::load_document(files[0]);
        out << serialize({"rescale", rescale(d.automaton), {}});
    });

    auto* reach = app.add_subcommand("reach", "restrict to the reachable fraction");
    reach->add_option("files", files, "one .pa file")->expected(1);
    reach->callback([&] {
        auto d = detail::load_document(files[0]);
        out << serialize({"reach", reachable_fraction(d.automaton), {}});
    });

    auto* nf = app.add_subcommand("normalform", "minimal canonical form");
    add_kind(nf);
    nf->add_option("files", files, "one .pa file")->expected(1);
    nf->callback([&] {
        auto d = detail::load_document(files[0]);
        out << serialize({"normalform", normal_form(d.automaton, detail::parse_kind(kind)), {}});
    });

    auto* meet_cmd = app.add_subcommand("meet", "intersection quotient of two bisimilar quotients");
    add_kind(meet_cmd);
    meet_cmd->add_option("files", files, "two .pa files")->expected(2);
    meet_cmd->callback([&] {
        auto a = detail::load_document(files[0]);
        auto b = detail::load_document(files[1]);
        auto m = meet(a.automaton, b.automaton, detail::parse_kind(kind));
        out << serialize({"meet", canonical_relabel(m).automaton, {}});
    });

    auto* join_cmd = app.add_subcommand("join", "union quotient of two bisimilar quotients");
    add_kind(join_cmd);
    join_cmd->add_option("files", files, "two .pa files")->expected(2);
    join_cmd->callback([&] {
        auto a = detail::load_document(files[0]);
        auto b = detail::load_document(files[1]);
        auto j = join(a.automaton, b.automaton, detail::parse_kind(kind));
        out << serialize({"join", canonical_relabel(j).automaton, {}});
    });

    auto* leq_cmd = app.add_subcommand("leq", "subset order on aligned bisimilar quotients");
    add_kind(leq_cmd);
    leq_cmd->add_option("files", files, "two .pa files")->expected(2);
    leq_cmd->callback([&] {
        auto a = detail::load_document(files[0]);
        auto b = detail::load_document(files[1]);
        bool ok = leq(a.automaton, b.automaton, detail::parse_kind(kind));
        out << (ok ? "true" : "false") << "\n";
        exit_code = ok ? 0 : 1;
    });

    auto* verify = app.add_subcommand("verify-lattice", "check the lattice laws on a set of quotients");
    add_kind(verify);
    verify->add_option("files", files, ".pa files")->expected(-1)->required();
    verify->callback([&] {
        QuotientSet qs;
        qs.kind = detail::parse_kind(kind);
        for (const auto& f : files) qs.members.push_back(detail::load_document(f).automaton);
        auto report = verify_lattice(qs);
        out << report.str();
        exit_code = report.all_laws_hold() ? 0 : 1;
    });

    auto* dot = app.add_subcommand("export-dot", "render an automaton as a GraphViz graph");
    dot->add_option("files", files, "one .pa file")->expected(1);
    dot->callback([&] {
        auto d = detail::load_document(files[0]);
        out << export_dot(d.automaton);
    });

    std::vector<std::string> argv_storage = args;
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>("paq"));
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

} // namespace paq
