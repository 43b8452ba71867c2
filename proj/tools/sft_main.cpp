// Command-line front end for analyzing self-similar groups of finite type:
// single-group verdicts, depth censuses, the depth-4 catalog, pattern-group
// utilities (minimize, graph, restrict, hausdorff).
//
// Exit codes: 0 definite verdict / success, 2 input error, 3 undecided,
// 4 unsupported scale.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sft/sft.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitScale = 4;

sft::LeafNumbering parse_numbering(const std::string& s) {
    if (s == "lex") return sft::LeafNumbering::Lex;
    if (s == "reversed") return sft::LeafNumbering::Reversed;
    sft::fail(sft::ErrorKind::Parse, "unknown leaf numbering \"" + s + "\" (use lex or reversed)");
}

sft::PatternGroup load_pattern(const std::string& path, sft::LeafNumbering numbering) {
    std::ifstream in(path);
    sft::require(in.good(), sft::ErrorKind::Parse, "cannot open " + path);
    return sft::parse_pattern_group(in, numbering);
}

void write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    sft::require(out.good(), sft::ErrorKind::Parse, "cannot write " + out_path);
    out << text;
}

std::string human_record(const sft::ClassificationRecord& rec) {
    std::ostringstream os;
    os << "pattern group: k=" << rec.alphabet << " d=" << rec.depth
       << " |P|=" << rec.pattern_order.str() << " m=" << rec.stabilizer_order.str() << "\n";
    os << "verdict: " << sft::to_string(rec.verdict);
    if (rec.witness_level) os << " (level " << *rec.witness_level << ")";
    if (rec.verdict == sft::VerdictTag::Undecided) os << " (searched n <= " << rec.max_n << ")";
    os << "\n";
    if (rec.finite_type) os << "isomorphism type: " << *rec.finite_type << "\n";
    if (rec.witness) os << "witness: " << *rec.witness << "\n";
    if (rec.hausdorff) os << "hausdorff dimension: " << rec.hausdorff->to_string() << "\n";
    os << "level transitive: " << (rec.level_transitive ? "yes" : "no") << "\n";
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"self-similar groups of finite type: decision procedures and censuses"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string numbering_str = "lex";
    int jobs = sft::default_jobs();
    std::string format = "human";
    app.add_option("--numbering", numbering_str, "leaf numbering: lex or reversed")
        ->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads (default: SFT_JOBS or hardware)")
        ->capture_default_str();
    app.add_option("--format", format, "output format: human or json")->capture_default_str();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "classify one pattern-group file");
    analyze->fallthrough();
    std::string analyze_file;
    int analyze_max_n = -1;
    analyze->add_option("file", analyze_file, "pattern group file")->required();
    analyze->add_option("--max-n", analyze_max_n, "criterion search bound (default d+4)");

    // census
    auto* census_cmd = app.add_subcommand("census", "classify all minimal pattern groups of a depth");
    census_cmd->fallthrough();
    int census_depth = 2;
    int census_max_n = -1;
    std::string census_out, census_csv;
    census_cmd->add_option("--depth", census_depth, "pattern depth (binary alphabet, d <= 3)")
        ->required();
    census_cmd->add_option("--max-n", census_max_n, "criterion search bound (default d+4)");
    census_cmd->add_option("--out", census_out, "write the JSON report to a file");
    census_cmd->add_option("--csv", census_csv, "write the per-group CSV to a file");

    // catalog
    auto* catalog_cmd = app.add_subcommand("catalog", "the depth-4 catalog of 32 pattern groups");
    catalog_cmd->fallthrough();
    std::string catalog_which;
    bool catalog_verify = false;
    std::string catalog_export;
    catalog_cmd->add_option("name", catalog_which, "catalog name (depth4)")->required();
    catalog_cmd->add_flag("--verify", catalog_verify,
                          "run the full verification battery and the Grigorchuk identification");
    catalog_cmd->add_option("--export", catalog_export, "write P_ijk.patgrp files to a directory");

    // minimize
    auto* minimize_cmd = app.add_subcommand("minimize", "minimal pattern group for the same G_P");
    minimize_cmd->fallthrough();
    std::string minimize_file, minimize_style = "leafperms";
    minimize_cmd->add_option("file", minimize_file, "pattern group file")->required();
    minimize_cmd->add_option("--style", minimize_style, "output style: leafperms or portraits")
        ->capture_default_str();

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "pattern graph of a pattern group");
    graph_cmd->fallthrough();
    std::string graph_file, graph_out;
    bool graph_dot = false;
    graph_cmd->add_option("file", graph_file, "pattern group file")->required();
    graph_cmd->add_flag("--dot", graph_dot, "emit DOT");
    graph_cmd->add_option("--out", graph_out, "output file (default stdout)");

    // restrict
    auto* restrict_cmd = app.add_subcommand("restrict", "order and generators of G_P|X^[n]");
    restrict_cmd->fallthrough();
    std::string restrict_file;
    int restrict_level = -1;
    restrict_cmd->add_option("file", restrict_file, "pattern group file")->required();
    restrict_cmd->add_option("--level", restrict_level, "restriction level n >= d")->required();

    // hausdorff
    auto* hausdorff_cmd = app.add_subcommand("hausdorff", "Hausdorff dimension of G_P");
    hausdorff_cmd->fallthrough();
    std::string hausdorff_file;
    hausdorff_cmd->add_option("file", hausdorff_file, "pattern group file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    sft::LeafNumbering numbering = parse_numbering(numbering_str);
    sft::require(jobs >= 1, sft::ErrorKind::Parse, "--jobs must be >= 1");
    bool json_format = format == "json";
    sft::require(json_format || format == "human", sft::ErrorKind::Parse,
                 "unknown format \"" + format + "\"");

    if (*analyze) {
        sft::PatternGroup p = load_pattern(analyze_file, numbering);
        int max_n = analyze_max_n > 0 ? analyze_max_n : p.depth() + 4;
        sft::ClassificationRecord rec = sft::classify(p, max_n);
        std::cout << (json_format ? rec.to_json().dump(2) + "\n" : human_record(rec));
        return rec.verdict == sft::VerdictTag::Undecided ? kExitUndecided : kExitOk;
    }

    if (*census_cmd) {
        sft::require(census_depth >= 1, sft::ErrorKind::Parse, "--depth must be >= 1");
        int max_n = census_max_n > 0 ? census_max_n : census_depth + 4;
        sft::CensusReport rep = sft::census(census_depth, max_n, jobs);
        std::string js = rep.to_json().dump(2);
        if (!census_out.empty()) write_or_print(js + "\n", census_out);
        if (!census_csv.empty()) write_or_print(rep.to_csv(), census_csv);
        if (json_format || census_out.empty()) {
            if (json_format)
                std::cout << js << "\n";
            else {
                std::cout << "depth " << rep.depth << ": " << rep.subgroup_count << " subgroups, "
                          << rep.minimal_count << " minimal pattern groups\n";
                std::cout << "  finite: " << rep.finite_count;
                for (const auto& [name, c] : rep.finite_types) std::cout << "  " << name << " x" << c;
                std::cout << "\n  not finitely generated: " << rep.not_fg_count;
                for (const auto& [lvl, c] : rep.not_fg_levels)
                    std::cout << "  n=" << lvl << " x" << c;
                std::cout << "\n  finitely generated: " << rep.fg_count;
                for (const auto& [lvl, c] : rep.fg_levels) std::cout << "  n=" << lvl << " x" << c;
                std::cout << "\n  undecided: " << rep.undecided_count << "\n";
            }
        }
        return kExitOk;
    }

    if (*catalog_cmd) {
        sft::require(catalog_which == "depth4", sft::ErrorKind::Parse,
                     "unknown catalog \"" + catalog_which + "\" (only depth4 exists)");
        if (!catalog_export.empty()) {
            for (const auto& [i, j, k] : sft::Depth4Catalog::all_triples()) {
                auto cycles = sft::Depth4Catalog::generator_cycles(i, j, k);
                std::ostringstream file;
                file << "2 4\nleafperms:\n";
                for (const auto& c : cycles) file << c << "\n";
                std::string name = catalog_export + "/P_" + std::to_string(i) + std::to_string(j) +
                                   std::to_string(k) + ".patgrp";
                write_or_print(file.str(), name);
            }
            std::cout << "wrote 32 pattern files to " << catalog_export << "\n";
        }
        if (catalog_verify) {
            sft::CatalogReport rep = sft::verify_depth4(jobs);
            sft::GrigorchukReport grig = sft::grigorchuk_check(rep.numbering);
            nlohmann::json out;
            out["catalog"] = rep.to_json();
            out["grigorchuk"] = grig.to_json();
            if (json_format)
                std::cout << out.dump(2) << "\n";
            else {
                std::cout << "numbering: " << sft::to_string(rep.numbering) << "\n";
                for (const auto& g : rep.groups)
                    std::cout << "P_" << g.i << g.j << g.k << ": order " << g.order.str()
                              << (g.ok ? " ok (FG at n=6)" : " FAILED: " + g.failure) << "\n";
                std::cout << "fingerprint buckets: " << rep.fingerprint_bucket_count << " (paper: "
                          << rep.paper_class_count << " isomorphism classes)\n";
                std::cout << "grigorchuk closure equals P_123: "
                          << (grig.equals_p123 ? "yes" : "NO") << "\n";
                std::cout << (rep.all_ok ? "catalog verification passed\n"
                                         : "catalog verification FAILED\n");
            }
            return rep.all_ok && grig.equals_p123 ? kExitOk : kExitInput;
        }
        if (catalog_export.empty() && !catalog_verify) {
            for (const auto& [i, j, k] : sft::Depth4Catalog::all_triples())
                std::cout << "P_" << i << j << k << " = < "
                          << sft::Depth4Catalog::generator_cycles(i, j, k)[0] << ", "
                          << sft::Depth4Catalog::generator_cycles(i, j, k)[1] << ", "
                          << sft::Depth4Catalog::generator_cycles(i, j, k)[2] << " >\n";
        }
        return kExitOk;
    }

    if (*minimize_cmd) {
        sft::PatternGroup p = load_pattern(minimize_file, numbering);
        sft::PatternFileStyle style = minimize_style == "portraits"
                                          ? sft::PatternFileStyle::Portraits
                                          : sft::PatternFileStyle::LeafPerms;
        std::cout << sft::serialize_pattern_group(p.minimize(), numbering, style);
        return kExitOk;
    }

    if (*graph_cmd) {
        sft::PatternGroup p = load_pattern(graph_file, numbering);
        if (p.size() > 512)
            std::cerr << "warning: pattern graph on " << p.size() << " vertices; DOT will be huge\n";
        sft::PatternGraph g = sft::pattern_graph(p);
        if (graph_dot) {
            write_or_print(sft::pattern_graph_dot(p, g), graph_out);
        } else {
            std::cout << p.size() << " vertices, " << g.arcs.size() << " arcs\n";
        }
        return kExitOk;
    }

    if (*restrict_cmd) {
        sft::PatternGroup p = load_pattern(restrict_file, numbering);
        sft::require(p.is_minimal(), sft::ErrorKind::Domain,
                     "restrict requires a minimal pattern group; run minimize first");
        sft::require(restrict_level >= p.depth(), sft::ErrorKind::Domain,
                     "--level must be >= the pattern depth");
        sft::RestrictionTower tower(p);
        const sft::PermutationGroup& g = tower.group(restrict_level);
        sft::require(g.order() == p.restriction_order(restrict_level), sft::ErrorKind::Internal,
                     "tower order disagrees with the growth formula");
        if (json_format) {
            nlohmann::json j;
            j["level"] = restrict_level;
            j["degree"] = g.degree();
            j["order"] = g.order().str();
            j["generators"] = nlohmann::json::array();
            for (const auto& gen : g.generators())
                j["generators"].push_back(gen.to_cycle_string());
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "G_P restricted to X^[" << restrict_level << "]: degree " << g.degree()
                      << ", order " << g.order().str() << "\n";
            for (const auto& gen : g.generators()) std::cout << gen.to_cycle_string() << "\n";
        }
        return kExitOk;
    }

    if (*hausdorff_cmd) {
        sft::PatternGroup p = load_pattern(hausdorff_file, numbering).minimize();
        sft::HausdorffDimension h = sft::hausdorff_dimension(p);
        if (json_format) {
            nlohmann::json j;
            j["exact"] = h.exact;
            j["value"] = h.value;
            if (h.exact) {
                j["num"] = h.num;
                j["den"] = h.den;
            }
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << h.to_string() << "\n";
        }
        return kExitOk;
    }

    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sft::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == sft::ErrorKind::Resource ? kExitScale : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
