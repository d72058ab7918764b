#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ymmf/ymmf.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGateFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

const double kNone = std::numeric_limits<double>::quiet_NaN();

struct Failure {
    int code;
    std::string message;
};

void check(ymmf_status s) {
    if (s != YMMF_OK) throw Failure{kExitError, std::string(ymmf_last_error())};
}

std::string num(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

struct Owned {
    char* p = nullptr;
    ~Owned() { ymmf_string_free(p); }
};

using MapPtr = std::unique_ptr<ymmf_map, decltype(&ymmf_map_free)>;
using ReportPtr = std::unique_ptr<ymmf_report, decltype(&ymmf_report_free)>;

struct Common {
    std::string out;
    std::string format = "md";
    bool timing = false;
};

struct MapSource {
    std::string path;
    std::string builtin;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "Write PREFIX.md and PREFIX.csv");
    sub->add_option("--format", c.format, "Format printed on stdout")->check(CLI::IsMember({"md", "csv", "none"}));
    sub->add_flag("--timing", c.timing, "Fill the runtime_ms column (reports are then not byte-stable)");
}

void add_map_source(CLI::App* sub, MapSource& m) {
    auto* a = sub->add_option("--map", m.path, "Map document");
    auto* b = sub->add_option("--builtin", m.builtin, "Built-in map (simple-loop, figure-eight, torus, genus2, torus-hole, grid:CxR, torus-grid:CxR)");
    a->excludes(b);
}

MapPtr open_map(const MapSource& src, ymmf_report* rep) {
    ymmf_map* m = nullptr;
    if (!src.path.empty()) {
        check(ymmf_map_load(src.path.c_str(), &m));
        ymmf_report_config(rep, "map", src.path.c_str());
    } else if (!src.builtin.empty()) {
        check(ymmf_map_builtin(src.builtin.c_str(), &m));
        ymmf_report_config(rep, "builtin", src.builtin.c_str());
    } else {
        throw Failure{kExitUsage, "one of --map or --builtin is required"};
    }
    return MapPtr(m, &ymmf_map_free);
}

class Timer {
public:
    explicit Timer(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        if (!on_) return kNone;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point start_;
};

void emit(const ymmf_report* rep, const Common& c) {
    Owned md, csv;
    check(ymmf_report_markdown(rep, &md.p));
    check(ymmf_report_csv(rep, &csv.p));
    if (!c.out.empty()) {
        for (const auto& [ext, text] : {std::pair<const char*, const char*>{".md", md.p}, {".csv", csv.p}}) {
            std::ofstream f(c.out + ext, std::ios::binary);
            if (!f) throw Failure{kExitError, "cannot write " + c.out + ext};
            f << text;
        }
    }
    if (c.format == "md") std::cout << md.p;
    if (c.format == "csv") std::cout << csv.p;
}

const char* areas_arg(const std::string& a) { return a.empty() ? nullptr : a.c_str(); }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wilson loops, master fields and Yang-Mills sampling on combinatorial maps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ymmf_version()));

    Common common;
    MapSource src;
    std::vector<std::string> loops;
    std::string areas;

    auto* map_info = app.add_subcommand("map-info", "Counts, genus and loop data of a map");
    std::string emit_path;
    add_map_source(map_info, src);
    map_info->add_option("--loop", loops, "Loops to describe (default: all named loops)");
    map_info->add_option("--emit", emit_path, "Write the normalized map document to this path");
    add_common(map_info, common);

    auto* eval_plane = app.add_subcommand("eval-plane", "Planar master field of loops");
    auto* eval_one = app.add_subcommand("eval-one-boundary", "Master field on a one-boundary map of any genus");
    auto* eval_surf = app.add_subcommand("eval-surface", "Master field on a closed surface with a polygon structure");
    for (auto* sub : {eval_plane, eval_one, eval_surf}) {
        add_map_source(sub, src);
        sub->add_option("--loop", loops, "Loop name or dart list")->required();
        sub->add_option("--areas", areas, "Interior face areas a,b,... (decimals or p/q)");
        add_common(sub, common);
    }

    auto* check_mm = app.add_subcommand("check-mm", "Makeenko-Migdal residuals at transverse crossings");
    std::vector<int> mm_vertices;
    std::vector<double> mm_h{1e-2, 5e-3, 1e-3};
    double mm_tol = 1e-5;
    add_map_source(check_mm, src);
    check_mm->add_option("--loop", loops, "Loop name or dart list")->required();
    check_mm->add_option("--areas", areas, "Interior face areas");
    check_mm->add_option("--vertex", mm_vertices, "Crossing vertices (default: all transverse crossings)");
    check_mm->add_option("--step", mm_h, "Finite-difference steps h")->delimiter(',');
    check_mm->add_option("--tol", mm_tol, "Gate on |residual| at the smallest h");
    add_common(check_mm, common);

    auto* mc_run = app.add_subcommand("mc-run", "Monte Carlo Wilson loops on a one-boundary map");
    std::string group = "U";
    int N = 8;
    std::uint64_t samples = 1000, seed = 1;
    int workers = 0, steps = 0;
    bool reference = false;
    add_map_source(mc_run, src);
    mc_run->add_option("--loop", loops, "Loop name or dart list")->required();
    mc_run->add_option("--areas", areas, "Interior face areas");
    mc_run->add_option("--group", group, "U, SU, SO or Sp");
    mc_run->add_option("--N", N, "Group rank")->check(CLI::Range(1, 4096));
    mc_run->add_option("--samples", samples, "Number of samples")->check(CLI::Range(2, 100000000));
    mc_run->add_option("--seed", seed, "Seed");
    mc_run->add_option("--workers", workers, "Worker threads (default: YMMF_WORKERS or hardware)")->check(CLI::Range(0, 1024));
    mc_run->add_option("--steps", steps, "Heat-kernel steps per face (0: area-based default)")->check(CLI::Range(0, 1000000));
    mc_run->add_flag("--reference", reference, "Also print the large-N limit");
    add_common(mc_run, common);

    auto* magic = app.add_subcommand("magic-check", "Casimir trace identities on random group elements");
    int pairs = 20;
    double magic_tol = 1e-12;
    magic->add_option("--group", group, "U, SU, SO or Sp")->required();
    magic->add_option("--N", N, "Group rank")->required()->check(CLI::Range(1, 512));
    magic->add_option("--pairs", pairs, "Random pairs")->check(CLI::Range(1, 100000));
    magic->add_option("--seed", seed, "Seed");
    magic->add_option("--tol", magic_tol, "Gate tolerance");
    add_common(magic, common);

    std::vector<std::string> words;
    double t = 1.0, T = 1.0;
    auto* tfree = app.add_subcommand("tfree", "t-free product of two Haar unitaries on words");
    tfree->add_option("--word", words, "Word in X, Y, X*, Y*, e.g. XYX*Y* or (XY)^2")->required();
    tfree->add_option("--t", t, "Time")->check(CLI::NonNegativeNumber);
    add_common(tfree, common);

    auto* phi = app.add_subcommand("phi-t", "Torus interpolation state on words");
    phi->add_option("--word", words, "Word in X, Y, X*, Y*")->required();
    phi->add_option("--T", T, "Torus area")->check(CLI::NonNegativeNumber);
    add_common(phi, common);

    auto* interp = app.add_subcommand("interp-report", "Torus state against t-free, classical and free products");
    std::string word_list = "XYX*Y*;XY^2X*Y^-2;(XYX*Y*)^2;XYXY*X*Y*";
    bool limits = false;
    interp->add_option("--T", T, "Torus area")->check(CLI::NonNegativeNumber);
    interp->add_option("--words", word_list, "Words separated by ';'");
    interp->add_flag("--limits", limits, "Also report the gaps at T = 1e-3 and T = 1e3");
    add_common(interp, common);

    auto* selftest = app.add_subcommand("selftest", "Fast built-in gates");
    add_common(selftest, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    ReportPtr rep(ymmf_report_new(sub->get_name().c_str()), &ymmf_report_free);
    ymmf_report* r = rep.get();
    int exit_code = kExitOk;

    try {
        if (sub == map_info) {
            MapPtr m = open_map(src, r);
            ymmf_map_info info;
            check(ymmf_map_get_info(m.get(), &info));
            for (const auto& [name, v] : {std::pair<const char*, int>{"darts", info.darts}, {"vertices", info.vertices},
                                          {"edges", info.edges}, {"faces", info.faces}, {"genus", info.genus},
                                          {"boundary_faces", info.boundary_faces}, {"polygon_structure", info.has_polygon}}) {
                ymmf_report_item(r, name, v, kNone, "exact", kNone, nullptr);
            }
            if (loops.empty()) {
                for (int i = 0; i < info.loops; ++i) loops.emplace_back(ymmf_map_loop_name(m.get(), i));
            }
            for (const std::string& l : loops) {
                ymmf_loop_info li;
                check(ymmf_loop_get_info(m.get(), l.c_str(), &li));
                std::string note = li.tame ? "tame" : "not tame";
                ymmf_report_item(r, (l + ".length").c_str(), li.length, kNone, "exact", kNone, note.c_str());
                ymmf_report_item(r, (l + ".transverse_crossings").c_str(), li.transverse_crossings, kNone, "exact", kNone, nullptr);
                ymmf_report_item(r, (l + ".touchings").c_str(), li.touchings, kNone, "exact", kNone, nullptr);
                ymmf_report_item(r, (l + ".null_homologous").c_str(), li.null_homologous, kNone, "exact", kNone, nullptr);
                if (li.contractible >= 0) {
                    ymmf_report_item(r, (l + ".contractible").c_str(), li.contractible, kNone, "exact", kNone, nullptr);
                }
            }
            if (!emit_path.empty()) {
                Owned text;
                check(ymmf_map_serialize(m.get(), &text.p));
                std::ofstream f(emit_path, std::ios::binary);
                if (!f) throw Failure{kExitError, "cannot write " + emit_path};
                f << text.p;
            }
        } else if (sub == eval_plane || sub == eval_one || sub == eval_surf) {
            MapPtr m = open_map(src, r);
            if (!areas.empty()) ymmf_report_config(r, "areas", areas.c_str());
            for (const std::string& l : loops) {
                Timer timer(common.timing);
                double v = 0.0;
                if (sub == eval_surf) {
                    int contractible = 0, conjectural = 0;
                    check(ymmf_eval_surface(m.get(), l.c_str(), areas_arg(areas), &v, &contractible, &conjectural));
                    ymmf_report_item(r, l.c_str(), v, kNone, conjectural ? "conjectural" : "exact", timer.ms(),
                                     contractible ? "contractible" : "noncontractible");
                    ymmf_report_item(r, (l + ".contractible").c_str(), contractible, kNone, "exact", kNone, nullptr);
                } else {
                    check(sub == eval_plane ? ymmf_eval_planar(m.get(), l.c_str(), areas_arg(areas), &v)
                                            : ymmf_eval_one_boundary(m.get(), l.c_str(), areas_arg(areas), &v));
                    ymmf_report_item(r, l.c_str(), v, kNone, "exact", timer.ms(), nullptr);
                }
            }
        } else if (sub == check_mm) {
            MapPtr m = open_map(src, r);
            if (!areas.empty()) ymmf_report_config(r, "areas", areas.c_str());
            if (mm_h.empty()) throw Failure{kExitUsage, "--step needs at least one value"};
            std::string hs;
            for (double h : mm_h) hs += (hs.empty() ? "" : ",") + num(h);
            ymmf_report_config(r, "h", hs.c_str());
            ymmf_report_config(r, "tol", num(mm_tol).c_str());
            for (const std::string& l : loops) {
                std::vector<int> verts = mm_vertices;
                if (verts.empty()) {
                    std::size_t count = 0;
                    check(ymmf_loop_crossings(m.get(), l.c_str(), nullptr, 0, &count));
                    verts.resize(count);
                    check(ymmf_loop_crossings(m.get(), l.c_str(), verts.data(), count, &count));
                }
                if (verts.empty()) throw Failure{kExitError, "loop " + l + " has no transverse crossing"};
                for (int v : verts) {
                    std::vector<double> res;
                    for (double h : mm_h) {
                        Timer timer(common.timing);
                        double x = 0.0;
                        check(ymmf_mm_residual(m.get(), l.c_str(), areas_arg(areas), v, h, &x));
                        res.push_back(x);
                        std::string item = l + "@v" + std::to_string(v) + ",h=" + num(h);
                        ymmf_report_item(r, item.c_str(), x, kNone, "exact", timer.ms(), nullptr);
                    }
                    std::string name = l + "@v" + std::to_string(v);
                    if (res.size() >= 2 && res.front() != 0.0 && res.back() != 0.0) {
                        double order = std::log(std::fabs(res.front() / res.back())) / std::log(mm_h.front() / mm_h.back());
                        ymmf_report_item(r, (name + ".order").c_str(), order, kNone, "exact", kNone, "observed decay order in h");
                    }
                    bool ok = std::fabs(res.back()) < mm_tol;
                    ymmf_report_gate(r, name.c_str(), ok, ("|residual| = " + num(std::fabs(res.back()))).c_str());
                }
            }
        } else if (sub == mc_run) {
            MapPtr m = open_map(src, r);
            int w = workers > 0 ? workers : ymmf_default_workers();
            ymmf_report_config(r, "group", group.c_str());
            ymmf_report_config(r, "N", std::to_string(N).c_str());
            ymmf_report_config(r, "samples", std::to_string(samples).c_str());
            ymmf_report_config(r, "seed", std::to_string(seed).c_str());
            ymmf_report_config(r, "workers", std::to_string(w).c_str());
            ymmf_report_config(r, "steps", steps > 0 ? std::to_string(steps).c_str() : "area default");
            if (!areas.empty()) ymmf_report_config(r, "areas", areas.c_str());
            std::vector<const char*> names;
            for (const std::string& l : loops) names.push_back(l.c_str());
            std::vector<double> mean(loops.size()), se(loops.size()), var(loops.size());
            ymmf_mc_config cfg{group.c_str(), N, samples, seed, w, steps};
            Timer timer(common.timing);
            check(ymmf_mc_run(m.get(), names.data(), names.size(), areas_arg(areas), &cfg, mean.data(), se.data(), var.data()));
            double elapsed = timer.ms();
            for (std::size_t i = 0; i < loops.size(); ++i) {
                ymmf_report_item(r, loops[i].c_str(), mean[i], se[i], "mc(stderr)", elapsed, nullptr);
                ymmf_report_item(r, (loops[i] + ".variance").c_str(), var[i], kNone, "mc(stderr)", kNone, nullptr);
                if (reference) {
                    double ref = 0.0;
                    check(ymmf_eval_one_boundary(m.get(), loops[i].c_str(), areas_arg(areas), &ref));
                    ymmf_report_item(r, (loops[i] + ".limit").c_str(), ref, kNone, "exact", kNone, "large-N limit");
                }
            }
        } else if (sub == magic) {
            ymmf_report_config(r, "group", group.c_str());
            ymmf_report_config(r, "N", std::to_string(N).c_str());
            ymmf_report_config(r, "pairs", std::to_string(pairs).c_str());
            ymmf_report_config(r, "seed", std::to_string(seed).c_str());
            Timer timer(common.timing);
            double a = 0.0, b = 0.0;
            check(ymmf_magic_check(group.c_str(), N, pairs, seed, &a, &b));
            ymmf_report_item(r, "tr_1.max_residual", a, kNone, "exact", timer.ms(), nullptr);
            ymmf_report_item(r, "tr_2.max_residual", b, kNone, "exact", kNone, nullptr);
            ymmf_report_gate(r, "tr_1", a < magic_tol, ("max residual " + num(a)).c_str());
            ymmf_report_gate(r, "tr_2", b < magic_tol, ("max residual " + num(b)).c_str());
        } else if (sub == tfree || sub == phi) {
            ymmf_report_config(r, sub == tfree ? "t" : "T", num(sub == tfree ? t : T).c_str());
            for (const std::string& wd : words) {
                Timer timer(common.timing);
                double v = 0.0;
                check(sub == tfree ? ymmf_tfree_moment(wd.c_str(), t, &v) : ymmf_phi_t(wd.c_str(), T, &v));
                Owned canon;
                check(ymmf_word_format(wd.c_str(), &canon.p));
                ymmf_report_item(r, canon.p, v, kNone, sub == tfree ? "ode" : "exact", timer.ms(), nullptr);
            }
        } else if (sub == interp) {
            ymmf_report_config(r, "T", num(T).c_str());
            ymmf_report_config(r, "t", num(T / 4).c_str());
            for (const std::string& wd : split(word_list, ';')) {
                Owned canon;
                check(ymmf_word_format(wd.c_str(), &canon.p));
                std::string base = canon.p;
                Timer timer(common.timing);
                ymmf_interp_row row;
                check(ymmf_interp_row_eval(wd.c_str(), T, &row));
                const char* note = row.separating ? "separating: phi_T differs from the t-free product" : nullptr;
                ymmf_report_item(r, (base + ".phi_T").c_str(), row.phi, kNone, "exact", timer.ms(), note);
                ymmf_report_item(r, (base + ".tfree").c_str(), row.tfree, kNone, "ode", kNone, nullptr);
                ymmf_report_item(r, (base + ".classical").c_str(), row.classical, kNone, "exact", kNone, nullptr);
                ymmf_report_item(r, (base + ".free").c_str(), row.free_value, kNone, "exact", kNone, nullptr);
                ymmf_report_item(r, (base + ".separating").c_str(), row.separating, kNone, "exact", kNone, nullptr);
                if (limits) {
                    double cg = 0.0, fg = 0.0;
                    check(ymmf_interp_limits(wd.c_str(), &cg, &fg));
                    ymmf_report_item(r, (base + ".gap_classical_T=1e-3").c_str(), cg, kNone, "exact", kNone, nullptr);
                    ymmf_report_item(r, (base + ".gap_free_T=1e3").c_str(), fg, kNone, "exact", kNone, nullptr);
                }
            }
        } else if (sub == selftest) {
            ymmf_selftest(r);
        }
        if (ymmf_report_failed_gates(r) > 0) exit_code = kExitGateFailure;
        emit(r, common);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    }
    return exit_code;
}
