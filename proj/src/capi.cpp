#include "ymmf/ymmf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "ymmf/builders.hpp"
#include "ymmf/cover.hpp"
#include "ymmf/error.hpp"
#include "ymmf/free_moments.hpp"
#include "ymmf/groups.hpp"
#include "ymmf/homology.hpp"
#include "ymmf/io.hpp"
#include "ymmf/mc.hpp"
#include "ymmf/planar.hpp"
#include "ymmf/tfree.hpp"

using namespace ymmf;

struct ymmf_map {
    MapDocument doc;
    CombinatorialMap map;
    std::optional<PolygonMap> polygon;
};

struct ymmf_report {
    RunReport report;
};

static_assert(static_cast<int>(ErrorCode::InvalidArgument) == YMMF_ERR_INVALID_ARGUMENT, "status codes out of sync");
static_assert(static_cast<int>(ErrorCode::SchemaError) == YMMF_ERR_SCHEMA, "status codes out of sync");

namespace {

thread_local std::string last_error;

template <class F>
ymmf_status guard(F&& f) {
    try {
        f();
        last_error.clear();
        return YMMF_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<ymmf_status>(e.code());
    } catch (const std::exception& e) {
        last_error = e.what();
        return YMMF_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ymmf_map* make_handle(MapDocument doc) {
    auto* h = new ymmf_map;
    h->map = doc.build();
    if (doc.has_polygon()) h->polygon = doc.polygon_map();
    h->doc = std::move(doc);
    return h;
}

AreaVector areas_for(const ymmf_map* m, const char* areas) {
    if (areas) return parse_interior_areas(m->map, areas);
    return m->doc.area_vector(m->map);
}

LoopPath loop_for(const ymmf_map* m, const char* loop) {
    require(loop != nullptr, "loop is null");
    return resolve_loop(m->doc, m->map, loop);
}

void set_unit_areas(MapDocument& doc, const CombinatorialMap& m) {
    int interior = m.num_faces() - static_cast<int>(m.boundary_faces().size());
    doc.areas.assign(static_cast<std::size_t>(interior), "1");
}

bool parse_dims(const std::string& s, int& c, int& r) {
    std::size_t x = s.find('x');
    if (x == std::string::npos) return false;
    try {
        c = std::stoi(s.substr(0, x));
        r = std::stoi(s.substr(x + 1));
    } catch (const std::exception&) {
        return false;
    }
    return c >= 1 && r >= 1 && c <= 64 && r <= 64;
}

MapDocument builtin_document(const std::string& name) {
    MapDocument doc;
    if (name == "simple-loop") {
        CombinatorialMap m = simple_loop_map();
        doc = document_from_map(m);
        set_unit_areas(doc, m);
        doc.loops = {{"L", {0}}};
    } else if (name == "figure-eight") {
        CombinatorialMap m = figure_eight_map();
        doc = document_from_map(m);
        set_unit_areas(doc, m);
        doc.loops = {{"L", {0, 2}}, {"east", {0}}, {"west", {2}}};
    } else if (name == "torus") {
        PolygonMap pm = bouquet(1);
        doc = document_from_polygon(pm);
        doc.abelian = {{0, -1}, {1, 0}};
        set_unit_areas(doc, pm.map);
        doc.loops = {{"alpha", {0}}, {"beta", {2}}, {"comm", {0, 2, 1, 3}}};
    } else if (name == "genus2") {
        PolygonMap pm = bouquet(2);
        doc = document_from_polygon(pm);
        set_unit_areas(doc, pm.map);
        doc.loops = {{"a1", {0}}, {"b1", {2}}, {"comm1", {0, 2, 1, 3}}, {"relator", {0, 2, 1, 3, 4, 6, 5, 7}}};
    } else if (name == "torus-hole") {
        CombinatorialMap m = build_map(paired_alpha(6), sigma_from_rotations(6, {{0, 4, 2, 1, 5, 3}}), {}, {0});
        doc = document_from_map(m);
        set_unit_areas(doc, m);
        doc.loops = {{"a1", {0}}, {"b1", {2}}};
    } else if (name.rfind("grid:", 0) == 0) {
        int c = 0, r = 0;
        if (!parse_dims(name.substr(5), c, r)) throw Error(ErrorCode::InvalidArgument, "grid size must look like grid:3x2");
        GridMap g = grid_map(c, r);
        doc = document_from_map(g.map);
        set_unit_areas(doc, g.map);
        std::string moves = std::string(static_cast<std::size_t>(c), 'R') + std::string(static_cast<std::size_t>(r), 'U') +
                            std::string(static_cast<std::size_t>(c), 'L') + std::string(static_cast<std::size_t>(r), 'D');
        doc.loops = {{"boundary", g.walk(0, 0, moves).darts}};
    } else if (name.rfind("torus-grid:", 0) == 0) {
        int c = 0, r = 0;
        if (!parse_dims(name.substr(11), c, r)) throw Error(ErrorCode::InvalidArgument, "grid size must look like torus-grid:3x2");
        TorusGrid g = torus_grid(c, r);
        doc = document_from_polygon(g.surface);
        doc.abelian = {{1, 0}, {0, 1}};
        set_unit_areas(doc, g.surface.map);
        doc.loops = {{"square", g.walk(0, 0, "RULD").darts},
                     {"row", g.walk(0, 0, std::string(static_cast<std::size_t>(c), 'R')).darts}};
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown built-in map '" + name + "'");
    }
    return doc;
}

}  // namespace

extern "C" {

const char* ymmf_version(void) { return "1.0.0"; }

const char* ymmf_status_name(ymmf_status status) {
    if (status == YMMF_OK) return "Ok";
    if (status == YMMF_ERR_INTERNAL) return "Internal";
    if (status >= 1 && status <= YMMF_ERR_INVALID_ARGUMENT) return error_code_name(static_cast<ErrorCode>(status));
    return "Unknown";
}

const char* ymmf_last_error(void) { return last_error.c_str(); }

void ymmf_string_free(char* s) { std::free(s); }

int ymmf_default_workers(void) { return default_workers(); }

ymmf_status ymmf_map_parse(const char* text, ymmf_map** out) {
    return guard([&] {
        require(text && out, "null argument");
        *out = make_handle(parse_map(text));
    });
}

ymmf_status ymmf_map_load(const char* path, ymmf_map** out) {
    return guard([&] {
        require(path && out, "null argument");
        *out = make_handle(load_map_file(path));
    });
}

ymmf_status ymmf_map_builtin(const char* name, ymmf_map** out) {
    return guard([&] {
        require(name && out, "null argument");
        *out = make_handle(builtin_document(name));
    });
}

void ymmf_map_free(ymmf_map* m) { delete m; }

ymmf_status ymmf_map_serialize(const ymmf_map* m, char** out) {
    return guard([&] {
        require(m && out, "null argument");
        *out = dup(serialize_map(m->doc));
    });
}

ymmf_status ymmf_map_get_info(const ymmf_map* m, ymmf_map_info* out) {
    return guard([&] {
        require(m && out, "null argument");
        out->darts = m->map.num_darts();
        out->vertices = m->map.num_vertices();
        out->edges = m->map.num_edges();
        out->faces = m->map.num_faces();
        out->genus = m->map.genus();
        out->boundary_faces = static_cast<int>(m->map.boundary_faces().size());
        out->has_polygon = m->polygon.has_value();
        out->has_areas = !m->doc.areas.empty();
        out->loops = static_cast<int>(m->doc.loops.size());
    });
}

const char* ymmf_map_loop_name(const ymmf_map* m, int i) {
    if (!m || i < 0 || i >= static_cast<int>(m->doc.loops.size())) return nullptr;
    return m->doc.loops[static_cast<std::size_t>(i)].first.c_str();
}

ymmf_status ymmf_loop_get_info(const ymmf_map* m, const char* loop, ymmf_loop_info* out) {
    return guard([&] {
        require(m && out, "null argument");
        LoopPath l = loop_for(m, loop);
        out->length = static_cast<int>(l.size());
        out->base = l.base;
        IntersectionProfile p;
        try {
            p = intersection_profile(m->map, l);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EdgeReused && e.code() != ErrorCode::VertexOverused) throw;
            p.tame = false;
        }
        out->tame = p.tame;
        out->transverse_crossings = 0;
        out->touchings = 0;
        for (const Crossing& c : p.crossings) {
            if (c.type == CrossingType::Transverse) {
                ++out->transverse_crossings;
            } else {
                ++out->touchings;
            }
        }
        out->null_homologous = homology_class(m->map, l).is_zero();
        out->contractible = m->polygon ? static_cast<int>(is_contractible(*m->polygon, l)) : -1;
    });
}

ymmf_status ymmf_loop_crossings(const ymmf_map* m, const char* loop, int* vertices, size_t cap, size_t* count) {
    return guard([&] {
        require(m && count, "null argument");
        LoopPath l = loop_for(m, loop);
        std::size_t k = 0;
        for (const Crossing& c : intersection_profile(m->map, l).crossings) {
            if (c.type != CrossingType::Transverse) continue;
            if (vertices && k < cap) vertices[k] = c.vertex;
            ++k;
        }
        *count = k;
    });
}

ymmf_status ymmf_eval_planar(const ymmf_map* m, const char* loop, const char* areas, double* value) {
    return guard([&] {
        require(m && value, "null argument");
        *value = eval_planar(m->map, loop_for(m, loop), areas_for(m, areas));
    });
}

ymmf_status ymmf_eval_one_boundary(const ymmf_map* m, const char* loop, const char* areas, double* value) {
    return guard([&] {
        require(m && value, "null argument");
        *value = eval_one_boundary(m->map, loop_for(m, loop), areas_for(m, areas));
    });
}

ymmf_status ymmf_eval_surface(const ymmf_map* m, const char* loop, const char* areas, double* value, int* contractible,
                              int* conjectural) {
    return guard([&] {
        require(m && value, "null argument");
        if (!m->polygon) throw Error(ErrorCode::NoPolygonStructure, "map has no polygon structure");
        SurfaceValue v = eval_surface(*m->polygon, loop_for(m, loop), areas_for(m, areas));
        *value = v.value;
        if (contractible) *contractible = v.contractible;
        if (conjectural) *conjectural = v.conjectural;
    });
}

ymmf_status ymmf_mm_residual(const ymmf_map* m, const char* loop, const char* areas, int vertex, double h,
                             double* residual) {
    return guard([&] {
        require(m && residual, "null argument");
        LoopPath l = loop_for(m, loop);
        AreaVector a = areas_for(m, areas);
        *residual = m->polygon ? mm_residual_surface(*m->polygon, l, a, vertex, h) : mm_residual(m->map, l, a, vertex, h);
    });
}

ymmf_status ymmf_mc_run(const ymmf_map* m, const char* const* loops, size_t nloops, const char* areas,
                        const ymmf_mc_config* cfg, double* mean, double* stderr_out, double* variance) {
    return guard([&] {
        require(m && loops && cfg && cfg->group && mean && stderr_out && variance, "null argument");
        require(cfg->samples >= 2 && cfg->samples <= 100000000ull, "samples must be in [2, 1e8]");
        GroupSpec g = make_group(cfg->group, cfg->N);
        std::vector<LoopPath> ls;
        for (std::size_t i = 0; i < nloops; ++i) ls.push_back(loop_for(m, loops[i]));
        LassoBasis basis = lasso_basis(m->map);
        McConfig c;
        c.samples = static_cast<int>(cfg->samples);
        c.seed = cfg->seed;
        c.workers = cfg->workers > 0 ? cfg->workers : default_workers();
        c.steps = cfg->steps;
        auto est = wilson_estimates(m->map, ls, basis, areas_for(m, areas), g, c);
        for (std::size_t i = 0; i < nloops; ++i) {
            mean[i] = est[i].mean;
            stderr_out[i] = est[i].stderr_;
            variance[i] = est[i].variance;
        }
    });
}

ymmf_status ymmf_magic_check(const char* group, int N, int pairs, uint64_t seed, double* max_first, double* max_second) {
    return guard([&] {
        require(group && max_first && max_second, "null argument");
        require(pairs >= 1, "pairs must be positive");
        GroupSpec g = make_group(group, N);
        double a = 0.0, b = 0.0;
        for (int p = 0; p < pairs; ++p) {
            std::mt19937_64 ra = stream_rng(seed, static_cast<std::uint64_t>(p), 0);
            std::mt19937_64 rb = stream_rng(seed, static_cast<std::uint64_t>(p), 1);
            MagicResidual r = magic_check(g, sample_haar(g, ra), sample_haar(g, rb));
            a = std::max(a, r.first);
            b = std::max(b, r.second);
        }
        *max_first = a;
        *max_second = b;
    });
}

ymmf_status ymmf_nu(double t, int n, double* value) {
    return guard([&] {
        require(value, "null argument");
        *value = nu(t, n);
    });
}

ymmf_status ymmf_tfree_moment(const char* word, double t, double* value) {
    return guard([&] {
        require(word && value, "null argument");
        *value = tfree_moment(parse_monomial(word), t);
    });
}

ymmf_status ymmf_phi_t(const char* word, double T, double* value) {
    return guard([&] {
        require(word && value, "null argument");
        *value = phi_T_word(parse_monomial(word), T);
    });
}

ymmf_status ymmf_interp_row_eval(const char* word, double T, ymmf_interp_row* out) {
    return guard([&] {
        require(word && out, "null argument");
        InterpolationRow r = interpolation_report(T, {parse_monomial(word)}).front();
        out->phi = r.phi;
        out->tfree = r.tfree;
        out->classical = r.classical;
        out->free_value = r.free;
        out->separating = r.separating;
    });
}

ymmf_status ymmf_interp_limits(const char* word, double* classical_gap, double* free_gap) {
    return guard([&] {
        require(word && classical_gap && free_gap, "null argument");
        InterpolationLimits lim = interpolation_limits(parse_monomial(word));
        *classical_gap = lim.classical_gap;
        *free_gap = lim.free_gap;
    });
}

ymmf_status ymmf_word_format(const char* word, char** out) {
    return guard([&] {
        require(word && out, "null argument");
        *out = dup(format_monomial(canonical_monomial(parse_monomial(word))));
    });
}

ymmf_report* ymmf_report_new(const char* command) {
    try {
        return new ymmf_report{RunReport(command ? command : "")};
    } catch (...) {
        return nullptr;
    }
}

void ymmf_report_free(ymmf_report* r) { delete r; }

void ymmf_report_config(ymmf_report* r, const char* key, const char* value) {
    if (r && key && value) r->report.config(key, value);
}

void ymmf_report_item(ymmf_report* r, const char* item, double value, double stderr_value, const char* provenance,
                      double runtime_ms, const char* note) {
    if (!r || !item || !provenance) return;
    ReportItem i;
    i.item = item;
    i.value = value;
    if (!std::isnan(stderr_value)) i.stderr_ = stderr_value;
    i.provenance = provenance;
    if (!std::isnan(runtime_ms)) i.runtime_ms = runtime_ms;
    if (note) i.note = note;
    r->report.add(std::move(i));
}

void ymmf_report_gate(ymmf_report* r, const char* name, int passed, const char* detail) {
    if (r && name) r->report.gate(name, passed != 0, detail ? detail : "");
}

int ymmf_report_failed_gates(const ymmf_report* r) { return r ? r->report.failed_gates() : 0; }

ymmf_status ymmf_report_markdown(const ymmf_report* r, char** out) {
    return guard([&] {
        require(r && out, "null argument");
        *out = dup(r->report.markdown());
    });
}

ymmf_status ymmf_report_csv(const ymmf_report* r, char** out) {
    return guard([&] {
        require(r && out, "null argument");
        *out = dup(r->report.csv());
    });
}

int ymmf_selftest(ymmf_report* r) {
    if (!r) return -1;
    RunReport& rep = r->report;
    int failures = 0;
    auto check = [&](const std::string& name, const std::string& prov, auto&& compute, double tol) {
        double err = 0.0;
        std::string detail;
        try {
            err = compute();
        } catch (const std::exception& e) {
            err = std::numeric_limits<double>::infinity();
            detail = e.what();
        }
        bool ok = err < tol;
        if (!ok) ++failures;
        if (detail.empty()) detail = "max error " + format_number(err) + " < " + format_number(tol);
        rep.add({name, err, std::nullopt, prov, std::nullopt, ok ? "pass" : "FAIL"});
        rep.gate(name, ok, detail);
    };

    check("nu_vs_ode", "ode", [] {
        double worst = 0.0;
        for (double t : {0.25, 1.0, 4.0}) {
            auto ode = nu_ode(t, 8);
            for (int n = 1; n <= 8; ++n) worst = std::max(worst, std::fabs(nu(t, n) - ode[n]));
        }
        return worst;
    }, 1e-8);
    check("planar_closed_forms", "exact", [] {
        CombinatorialMap disc = simple_loop_map(), eight = figure_eight_map();
        AreaVector a1{{0.7, 0.0}};
        double worst = std::fabs(eval_planar(disc, make_loop(disc, {0}), a1) - std::exp(-0.35));
        worst = std::max(worst, std::fabs(eval_planar(disc, make_loop(disc, {0, 0}), a1) - nu(0.7, 2)));
        AreaVector a2{{0.0, 0.4, 1.3}};
        worst = std::max(worst, std::fabs(eval_planar(eight, make_loop(eight, {0, 2}), a2) - std::exp(-0.85)));
        return worst;
    }, 1e-10);
    check("mm_residual_figure_eight", "exact", [] {
        CombinatorialMap eight = figure_eight_map();
        AreaVector a{{0.0, 1.0, 1.0}};
        return std::fabs(mm_residual(eight, make_loop(eight, {0, 2}), a, 0, 1e-3));
    }, 1e-5);
    check("magic_formulas", "exact", [] {
        double worst = 0.0;
        for (const char* fam : {"U", "SU", "SO", "Sp"}) {
            for (int N = 2; N <= 4; ++N) {
                GroupSpec g = make_group(fam, N);
                for (int p = 0; p < 20; ++p) {
                    std::mt19937_64 ra = stream_rng(7, static_cast<std::uint64_t>(p), 0);
                    std::mt19937_64 rb = stream_rng(7, static_cast<std::uint64_t>(p), 1);
                    MagicResidual res = magic_check(g, sample_haar(g, ra), sample_haar(g, rb));
                    worst = std::max({worst, res.first, res.second});
                }
            }
        }
        return worst;
    }, 1e-12);
    check("torus_master_field", "exact", [] {
        PolygonMap t = bouquet(1);
        double worst = 0.0;
        for (double T : {0.5, 1.0, 2.0}) {
            AreaVector a{{T}};
            worst = std::max(worst, std::fabs(eval_surface(t, make_loop(t.map, {0, 0}), a).value));
            worst = std::max(worst, std::fabs(eval_surface(t, make_loop(t.map, {0, 2, 1, 3}), a).value - std::exp(-T / 2)));
        }
        return worst;
    }, 1e-8);
    check("interpolation_separation", "ode", [] {
        double t = 0.5;
        Monomial sep = parse_monomial("XY^2X*Y^-2");
        double worst = std::fabs(tfree_moment(parse_monomial("XYX*Y*"), t) - std::exp(-2 * t));
        worst = std::max(worst, std::fabs(tfree_moment(sep, t) - std::exp(-2 * t)));
        worst = std::max(worst, std::fabs(phi_T_word(sep, 4 * t) - std::exp(-4 * t)));
        return worst;
    }, 1e-6);
    check("map_round_trip", "exact", [] {
        for (const char* name : {"simple-loop", "figure-eight", "torus", "genus2", "torus-hole", "grid:2x2"}) {
            MapDocument doc = builtin_document(name);
            std::string text = serialize_map(doc);
            if (!(parse_map(text) == doc) || serialize_map(parse_map(text)) != text) return 1.0;
        }
        return 0.0;
    }, 0.5);
    return failures;
}

}  // extern "C"
