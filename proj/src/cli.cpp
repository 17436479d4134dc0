#include "rewr/cli.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rewr/cofinality.hpp"
#include "rewr/core.hpp"
#include "rewr/decreasing.hpp"
#include "rewr/fologic.hpp"
#include "rewr/io.hpp"
#include "rewr/modeltheory.hpp"
#include "rewr/phi.hpp"

namespace rewr {

namespace {

/// Internal control-flow error carrying the final exit code and a message
/// for stderr.
struct CliError {
    int code;
    std::string message;
};

Ars as_plain(const ParsedSystem& sys, const std::string& what) {
    if (const Ars* a = std::get_if<Ars>(&sys)) return *a;
    if (const LabelledArs* l = std::get_if<LabelledArs>(&sys)) return l->project();
    throw CliError{kExitUsage, what + " requires a single-relation system"};
}

CommArs as_comm(const ParsedSystem& sys, const std::string& what) {
    if (const CommArs* c = std::get_if<CommArs>(&sys)) return *c;
    if (const LabelledCommArs* l = std::get_if<LabelledCommArs>(&sys)) return l->project();
    throw CliError{kExitUsage, what + " requires a two-relation system"};
}

LabelledArs as_labelled(const ParsedSystem& sys, const std::string& what) {
    if (const LabelledArs* l = std::get_if<LabelledArs>(&sys)) return *l;
    throw CliError{kExitUsage, what + " requires a labelled single-relation system"};
}

LabelledCommArs as_labelled_comm(const ParsedSystem& sys, const std::string& what) {
    if (const LabelledCommArs* l = std::get_if<LabelledCommArs>(&sys)) return *l;
    throw CliError{kExitUsage, what + " requires a labelled two-relation system"};
}

std::uint32_t parse_number(const std::string& token, const std::string& what) {
    if (token.empty() || token.size() > 10) throw CliError{kExitUsage, "invalid " + what};
    std::uint64_t value = 0;
    for (char c : token) {
        if (c < '0' || c > '9') throw CliError{kExitUsage, "invalid " + what};
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (value > 0xffffffffull) throw CliError{kExitUsage, "invalid " + what};
    return static_cast<std::uint32_t>(value);
}

FormulaPtr named_formula(const std::string& selector) {
    if (selector == "xi_a") return xi_a();
    if (selector == "xi_not_a") return xi_not_a();
    const auto colon = selector.find(':');
    const std::string name = selector.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : selector.substr(colon + 1);
    if (name == "delta_un") return delta_un(parse_number(args, "index in '" + selector + "'"));
    if (name == "delta_ac") return delta_ac(parse_number(args, "index in '" + selector + "'"));
    if (name == "delta_unr") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw CliError{kExitUsage, "selector '" + selector + "' needs two indices i,j"};
        return delta_unr(parse_number(args.substr(0, comma), "index in '" + selector + "'"),
                         parse_number(args.substr(comma + 1), "index in '" + selector + "'"));
    }
    throw CliError{kExitUsage, "unknown formula selector '" + selector + "'"};
}

Environment parse_bindings(const std::vector<std::string>& binds) {
    Environment env;
    for (const std::string& b : binds) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0)
            throw CliError{kExitUsage, "invalid binding '" + b + "' (expected name=node)"};
        const std::string name = b.substr(0, eq);
        const NodeId node = parse_number(b.substr(eq + 1), "node in binding '" + b + "'");
        if (!env.emplace(name, node).second)
            throw CliError{kExitUsage, "duplicate binding '" + name + "'"};
    }
    return env;
}

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Finite rewrite systems: property checks, decreasing-diagram tools, "
                 "generators, first-order evaluation, neighbourhood comparison, DOT export.",
                 "arstool"};
    app.require_subcommand(1);

    std::string check_file, check_prop;
    CLI::App* cmd_check = app.add_subcommand("check", "Decide a property of a system");
    cmd_check->add_option("file", check_file, "input file ('-' for stdin)")->required();
    cmd_check->add_option("--prop", check_prop, "property tag (cr, wcr, sc, diamond, un, unr, nfp, wn, sn, ac, ind, inc, cp, commute)")
        ->required();

    std::string dcr2_file, dcr2_out;
    CLI::App* cmd_dcr2 = app.add_subcommand(
        "dcr2", "Build a decreasing two-label assignment for a confluent system");
    cmd_dcr2->add_option("file", dcr2_file, "input file ('-' for stdin)")->required();
    CLI::Option* dcr2_out_opt =
        cmd_dcr2->add_option("--out", dcr2_out, "write the labelled system here ('-' = stdout)");

    std::string sdcr_file;
    std::uint32_t sdcr_k = 0;
    std::uint64_t sdcr_budget = kDefaultSearchBudget;
    CLI::App* cmd_sdcr = app.add_subcommand(
        "search-dcr", "Verify or search for a decreasing labelling (one relation)");
    cmd_sdcr->add_option("file", sdcr_file, "input file ('-' for stdin)")->required();
    CLI::Option* sdcr_k_opt =
        cmd_sdcr->add_option("-k", sdcr_k, "label count: search for a k-labelling");
    cmd_sdcr->add_option("--budget", sdcr_budget, "search step budget");

    std::string sdc_file;
    std::uint32_t sdc_k = 0;
    std::uint64_t sdc_budget = kDefaultSearchBudget;
    CLI::App* cmd_sdc = app.add_subcommand(
        "search-dc", "Verify or search for a decreasing labelling (two relations)");
    cmd_sdc->add_option("file", sdc_file, "input file ('-' for stdin)")->required();
    CLI::Option* sdc_k_opt =
        cmd_sdc->add_option("-k", sdc_k, "label count: search for a k-labelling");
    cmd_sdc->add_option("--budget", sdc_budget, "search step budget");

    std::string gen_what;
    std::uint32_t gen_n = 0, gen_p = 0;
    bool gen_witness = false;
    CLI::App* cmd_gen = app.add_subcommand("gen", "Generate a system to stdout");
    cmd_gen->add_option("what", gen_what,
                        "phi | cr-family | sn-family | inc-family | sc-family")
        ->required();
    CLI::Option* gen_n_opt = cmd_gen->add_option("-n", gen_n, "tower level (phi)");
    CLI::Option* gen_p_opt = cmd_gen->add_option("-p", gen_p, "member count (families)");
    CLI::Option* gen_w_opt =
        cmd_gen->add_flag("--witness", gen_witness, "emit the decreasing witness labelling (phi)");

    std::string fo_file, fo_formula, fo_named;
    std::vector<std::string> fo_binds;
    CLI::App* cmd_fo = app.add_subcommand("fo", "Evaluate a first-order formula on a system");
    cmd_fo->add_option("file", fo_file, "input file ('-' for stdin)")->required();
    CLI::Option* fo_formula_opt =
        cmd_fo->add_option("--formula", fo_formula, "formula text over =, !=, -->");
    CLI::Option* fo_named_opt = cmd_fo->add_option(
        "--named", fo_named,
        "library formula: delta_un:<i> | delta_unr:<i>,<j> | delta_ac:<i> | xi_a | xi_not_a");
    fo_formula_opt->excludes(fo_named_opt);
    cmd_fo->add_option("--bind", fo_binds, "constant binding name=node (repeatable)");

    std::string hanf_a, hanf_b;
    std::uint32_t hanf_r = 0;
    CLI::App* cmd_hanf =
        app.add_subcommand("hanf", "Compare neighbourhood class tables of two systems");
    cmd_hanf->add_option("fileA", hanf_a, "first input file ('-' for stdin)")->required();
    cmd_hanf->add_option("fileB", hanf_b, "second input file ('-' for stdin)")->required();
    cmd_hanf->add_option("-r", hanf_r, "neighbourhood radius")->required();

    std::string dot_file;
    CLI::App* cmd_dot = app.add_subcommand("dot", "Export a system as a DOT digraph");
    cmd_dot->add_option("file", dot_file, "input file ('-' for stdin)")->required();

    std::optional<std::string> stdin_cache;
    auto load = [&](const std::string& path) -> ParsedSystem {
        try {
            if (path == "-") {
                if (!stdin_cache) {
                    std::ostringstream buffer;
                    buffer << in.rdbuf();
                    stdin_cache = buffer.str();
                }
                return parse_system_from_string(*stdin_cache);
            }
            std::ifstream file(path);
            if (!file) throw CliError{kExitUsage, "cannot open '" + path + "'"};
            return parse_system(file);
        } catch (const ParseError& e) {
            throw CliError{kExitUsage,
                           (path == "-" ? std::string("<stdin>") : path) + ": " + e.what()};
        }
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (cmd_check->parsed()) {
            const auto prop = property_from_tag(check_prop);
            if (!prop) throw CliError{kExitUsage, "unknown property '" + check_prop + "'"};
            const ParsedSystem sys = load(check_file);
            const PropertyReport report =
                *prop == Property::COMMUTE
                    ? check_commutation(as_comm(sys, "property commute"))
                    : check(as_plain(sys, "property " + check_prop), *prop);
            if (report.holds) {
                out << upper(check_prop) << " true\n";
                return kExitHolds;
            }
            out << upper(check_prop) << " false witness " << witness_to_string(*report.witness)
                << "\n";
            return kExitFails;
        }

        if (cmd_dcr2->parsed()) {
            const auto result = dcr2_construct(as_plain(load(dcr2_file), "dcr2"));
            if (const NotConfluent* nc = std::get_if<NotConfluent>(&result)) {
                out << "NOT CONFLUENT component=" << nc->component << " pair=" << nc->first
                    << "," << nc->second << "\n";
                return kExitFails;
            }
            const LabelledArs& labelled = std::get<LabelledArs>(result);
            if (dcr2_out_opt->count() && dcr2_out != "-") {
                std::ofstream file(dcr2_out);
                if (!file) throw CliError{kExitUsage, "cannot write '" + dcr2_out + "'"};
                file << print_system(labelled);
            }
            out << "DCR2 OK\n";
            if (dcr2_out_opt->count() && dcr2_out == "-") out << print_system(labelled);
            return kExitHolds;
        }

        if (cmd_sdcr->parsed()) {
            const ParsedSystem sys = load(sdcr_file);
            if (sdcr_k_opt->count()) {
                const auto result =
                    dcr_search(as_plain(sys, "search-dcr"), sdcr_k, sdcr_budget);
                if (result.labelling) {
                    out << "DECREASING\n" << print_system(*result.labelling);
                    return kExitHolds;
                }
                if (result.exhausted) {
                    out << "NOT-DECREASING\n";
                    return kExitFails;
                }
                out << "UNKNOWN(budget)\n";
                return kExitUnknown;
            }
            const DecreasingReport report =
                is_locally_decreasing(as_labelled(sys, "search-dcr verification"));
            if (report.decreasing) {
                out << "DECREASING\n";
                return kExitHolds;
            }
            out << "NOT-DECREASING " << report.witness->apex << " " << report.witness->left.dst
                << " " << report.witness->right.dst << "\n";
            return kExitFails;
        }

        if (cmd_sdc->parsed()) {
            const ParsedSystem sys = load(sdc_file);
            if (sdc_k_opt->count()) {
                const auto result = dc_search(as_comm(sys, "search-dc"), sdc_k, sdc_budget);
                if (result.labelling) {
                    out << "DECREASING\n" << print_system(*result.labelling);
                    return kExitHolds;
                }
                if (result.exhausted) {
                    out << "NOT-DECREASING\n";
                    return kExitFails;
                }
                out << "UNKNOWN(budget)\n";
                return kExitUnknown;
            }
            const DecreasingReport report =
                is_locally_decreasing_comm(as_labelled_comm(sys, "search-dc verification"));
            if (report.decreasing) {
                out << "DECREASING\n";
                return kExitHolds;
            }
            out << "NOT-DECREASING " << report.witness->apex << " " << report.witness->left.dst
                << " " << report.witness->right.dst << "\n";
            return kExitFails;
        }

        if (cmd_gen->parsed()) {
            if (gen_what == "phi") {
                if (!gen_n_opt->count())
                    throw CliError{kExitUsage, "gen phi requires -n <level>"};
                if (gen_p_opt->count())
                    throw CliError{kExitUsage, "-p does not apply to gen phi"};
                out << (gen_witness ? print_system(phi_witness_labelling(gen_n))
                                    : print_system(phi(gen_n).comm));
                return kExitHolds;
            }
            const auto dash = gen_what.rfind("-family");
            std::optional<FamilyKind> kind;
            if (dash != std::string::npos && dash + 7 == gen_what.size())
                kind = family_from_tag(gen_what.substr(0, dash));
            if (!kind) throw CliError{kExitUsage, "unknown generator '" + gen_what + "'"};
            if (!gen_p_opt->count())
                throw CliError{kExitUsage, "gen " + gen_what + " requires -p <members>"};
            if (gen_n_opt->count() || gen_w_opt->count())
                throw CliError{kExitUsage, "-n/--witness do not apply to gen " + gen_what};
            out << print_system(gen_family(*kind, gen_p));
            return kExitHolds;
        }

        if (cmd_fo->parsed()) {
            if (fo_formula_opt->count() + fo_named_opt->count() != 1)
                throw CliError{kExitUsage, "fo requires exactly one of --formula and --named"};
            FormulaPtr formula;
            if (fo_formula_opt->count()) {
                try {
                    formula = parse_formula(fo_formula);
                } catch (const FormulaParseError& e) {
                    throw CliError{kExitUsage, std::string("formula: ") + e.what()};
                }
            } else {
                formula = named_formula(fo_named);
            }
            const bool value = eval(as_plain(load(fo_file), "fo"), formula,
                                    parse_bindings(fo_binds));
            out << (value ? "true" : "false") << "\n";
            return value ? kExitHolds : kExitFails;
        }

        if (cmd_hanf->parsed()) {
            const Ars a = as_plain(load(hanf_a), "hanf");
            const Ars b = as_plain(load(hanf_b), "hanf");
            const LocalIsoResult result = locally_isomorphic(a, b, hanf_r);
            if (result.isomorphic)
                out << "LOCALLY-ISOMORPHIC\n";
            else
                out << "NOT " << hanf_r << "-LOCALLY-ISOMORPHIC\n";
            std::set<std::string> keys;
            for (const auto& [enc, count] : result.table_a) keys.insert(enc);
            for (const auto& [enc, count] : result.table_b) keys.insert(enc);
            for (const std::string& enc : keys) {
                const auto ia = result.table_a.find(enc);
                const auto ib = result.table_b.find(enc);
                out << enc << " " << (ia == result.table_a.end() ? 0 : ia->second) << " "
                    << (ib == result.table_b.end() ? 0 : ib->second) << "\n";
            }
            return result.isomorphic ? kExitHolds : kExitFails;
        }

        if (cmd_dot->parsed()) {
            out << export_dot(load(dot_file));
            return kExitHolds;
        }

        throw CliError{kExitUsage, "no subcommand given"};
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitHolds;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitHolds;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const CliError& e) {
        err << e.message << "\n";
        return e.code;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace rewr
