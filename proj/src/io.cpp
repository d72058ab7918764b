#include "ymmf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ymmf/error.hpp"

namespace ymmf {

namespace {

struct Token {
    std::string text;
    int col = 0;
};

struct Entry {
    int line = 0;
    std::vector<Token> tokens;
    const Token& key() const { return tokens.front(); }
    std::size_t arity() const { return tokens.size() - 1; }
};

[[noreturn]] void schema_error(int line, int col, const std::string& what) {
    throw Error(ErrorCode::SchemaError, std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

[[noreturn]] void dangling(int line, int col, const std::string& what) {
    throw Error(ErrorCode::DanglingId, std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

long parse_long(const Entry& e, const Token& t) {
    long v = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) schema_error(e.line, t.col, "expected an integer, got '" + t.text + "'");
    return v;
}

std::vector<int> int_list(const Entry& e) {
    std::vector<int> out;
    for (std::size_t i = 1; i < e.tokens.size(); ++i) {
        long v = parse_long(e, e.tokens[i]);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            schema_error(e.line, e.tokens[i].col, "integer out of range");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void check_darts(const Entry& e, std::size_t first_token, int num_darts) {
    for (std::size_t i = first_token; i < e.tokens.size(); ++i) {
        long v = parse_long(e, e.tokens[i]);
        if (v < 0 || v >= num_darts) dangling(e.line, e.tokens[i].col, "dart " + e.tokens[i].text + " does not exist");
    }
}

std::vector<Entry> tokenize(const std::string& text) {
    std::vector<Entry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Entry e;
        e.line = lineno;
        std::size_t i = 0;
        while (i < line.size()) {
            if (line[i] == '#') break;
            if (line[i] == ' ' || line[i] == '\t') {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '#') ++j;
            e.tokens.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
            i = j;
        }
        if (!e.tokens.empty()) entries.push_back(std::move(e));
    }
    return entries;
}

bool valid_loop_name(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

template <class T>
void append_list(std::string& out, const std::string& key, const std::vector<T>& v) {
    out += key;
    for (const T& x : v) {
        out += ' ';
        out += std::to_string(x);
    }
    out += '\n';
}

}  // namespace

bool MapDocument::operator==(const MapDocument& o) const {
    if (areas.size() != o.areas.size()) return false;
    for (std::size_t i = 0; i < areas.size(); ++i) {
        if (parse_rational(areas[i]) != parse_rational(o.areas[i])) return false;
    }
    return version == o.version && num_darts == o.num_darts && alpha == o.alpha && sigma == o.sigma &&
           clockwise == o.clockwise && positive == o.positive && boundary == o.boundary && side == o.side &&
           polygon == o.polygon && abelian == o.abelian && loops == o.loops;
}

CombinatorialMap MapDocument::build() const {
    std::vector<Dart> s = sigma;
    if (clockwise) {
        for (Dart d = 0; d < num_darts; ++d) s[sigma[d]] = d;
    }
    return build_map(alpha, s, positive, boundary);
}

PolygonMap MapDocument::polygon_map() const {
    if (!has_polygon()) throw Error(ErrorCode::NoPolygonStructure, "document has no side labels");
    return make_polygon_map(build(), side, polygon, abelian);
}

std::vector<Rational> MapDocument::area_values() const {
    std::vector<Rational> out;
    for (const std::string& a : areas) out.push_back(parse_rational(a));
    return out;
}

AreaVector MapDocument::area_vector(const CombinatorialMap& m) const {
    if (areas.empty()) throw Error(ErrorCode::AreaMismatch, "document carries no areas");
    std::vector<double> interior;
    for (const Rational& q : area_values()) interior.push_back(to_double(q));
    AreaVector a;
    a.values.assign(static_cast<std::size_t>(m.num_faces()), 0.0);
    std::size_t k = 0;
    for (FaceId f = 0; f < m.num_faces(); ++f) {
        if (m.is_boundary(f)) continue;
        if (k >= interior.size()) throw Error(ErrorCode::AreaMismatch, "too few areas for the interior faces");
        a.values[f] = interior[k++];
    }
    if (k != interior.size()) throw Error(ErrorCode::AreaMismatch, "too many areas for the interior faces");
    validate_areas(m, a);
    return a;
}

const std::vector<Dart>* MapDocument::find_loop(const std::string& name) const {
    for (const auto& [n, darts] : loops) {
        if (n == name) return &darts;
    }
    return nullptr;
}

MapDocument parse_map(const std::string& text) {
    std::vector<Entry> entries = tokenize(text);
    if (entries.empty()) schema_error(1, 1, "empty document");
    const Entry& head = entries.front();
    if (head.key().text != "ymmf-map") schema_error(head.line, head.key().col, "document must start with 'ymmf-map 1'");
    if (head.arity() != 1) schema_error(head.line, head.key().col, "version tag takes one value");
    MapDocument doc;
    doc.version = static_cast<int>(parse_long(head, head.tokens[1]));
    if (doc.version != 1) schema_error(head.line, head.tokens[1].col, "unsupported version " + head.tokens[1].text);

    static const std::set<std::string> known{"darts",    "alpha",   "sigma",   "orientation", "positive", "boundary",
                                             "side",     "polygon", "abelian", "area",        "loop"};
    std::map<std::string, const Entry*> single;
    std::vector<const Entry*> loop_entries;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const Entry& e = entries[i];
        const std::string& k = e.key().text;
        if (!known.count(k)) schema_error(e.line, e.key().col, "unknown key '" + k + "'");
        if (k == "loop") {
            loop_entries.push_back(&e);
            continue;
        }
        if (single.count(k)) schema_error(e.line, e.key().col, "duplicate key '" + k + "'");
        single[k] = &e;
    }
    auto need = [&](const char* k) -> const Entry& {
        auto it = single.find(k);
        if (it == single.end()) schema_error(entries.back().line + 1, 1, std::string("missing key '") + k + "'");
        return *it->second;
    };

    const Entry& darts = need("darts");
    if (darts.arity() != 1) schema_error(darts.line, darts.key().col, "'darts' takes one value");
    long n = parse_long(darts, darts.tokens[1]);
    if (n <= 0 || n % 2 != 0 || n > 10000000) schema_error(darts.line, darts.tokens[1].col, "dart count must be even and positive");
    doc.num_darts = static_cast<int>(n);

    auto table = [&](const Entry& e) {
        if (static_cast<long>(e.arity()) != n) {
            schema_error(e.line, e.key().col, "'" + e.key().text + "' needs " + std::to_string(n) + " entries");
        }
        check_darts(e, 1, doc.num_darts);
        return int_list(e);
    };
    const Entry& alpha = need("alpha");
    doc.alpha = table(alpha);
    for (Dart d = 0; d < doc.num_darts; ++d) {
        const int col = alpha.tokens[static_cast<std::size_t>(d) + 1].col;
        if (doc.alpha[d] == d) schema_error(alpha.line, col, "alpha has a fixed point at dart " + std::to_string(d));
        if (doc.alpha[doc.alpha[d]] != d) schema_error(alpha.line, col, "alpha is not an involution at dart " + std::to_string(d));
    }
    const Entry& sigma = need("sigma");
    doc.sigma = table(sigma);
    {
        std::vector<char> seen(doc.sigma.size(), 0);
        for (std::size_t i = 0; i < doc.sigma.size(); ++i) {
            if (seen[doc.sigma[i]]++) schema_error(sigma.line, sigma.tokens[i + 1].col, "sigma is not a permutation");
        }
    }
    if (auto it = single.find("orientation"); it != single.end()) {
        const Entry& e = *it->second;
        if (e.arity() != 1 || (e.tokens[1].text != "ccw" && e.tokens[1].text != "cw")) {
            schema_error(e.line, e.key().col, "orientation must be 'ccw' or 'cw'");
        }
        doc.clockwise = e.tokens[1].text == "cw";
    }
    if (auto it = single.find("positive"); it != single.end()) {
        check_darts(*it->second, 1, doc.num_darts);
        doc.positive = int_list(*it->second);
    }
    const Entry* boundary = nullptr;
    if (auto it = single.find("boundary"); it != single.end()) {
        boundary = it->second;
        doc.boundary = int_list(*boundary);
        for (std::size_t i = 0; i < doc.boundary.size(); ++i) {
            if (doc.boundary[i] < 0) dangling(boundary->line, boundary->tokens[i + 1].col, "negative face id");
        }
    }

    CombinatorialMap m;
    {
        std::vector<Dart> s = doc.sigma;
        if (doc.clockwise) {
            for (Dart d = 0; d < doc.num_darts; ++d) s[doc.sigma[d]] = d;
        }
        try {
            m = build_map(doc.alpha, s, doc.positive, {});
        } catch (const Error& err) {
            schema_error(sigma.line, sigma.key().col, err.what());
        }
        if (boundary) {
            for (std::size_t i = 0; i < doc.boundary.size(); ++i) {
                if (doc.boundary[i] >= m.num_faces()) {
                    dangling(boundary->line, boundary->tokens[i + 1].col, "face " + boundary->tokens[i + 1].text + " does not exist");
                }
            }
            try {
                m = m.with_boundary(doc.boundary);
            } catch (const Error& err) {
                schema_error(boundary->line, boundary->key().col, err.what());
            }
        }
    }

    auto side_it = single.find("side");
    auto poly_it = single.find("polygon");
    if ((side_it == single.end()) != (poly_it == single.end())) {
        const Entry& e = side_it != single.end() ? *side_it->second : *poly_it->second;
        schema_error(e.line, e.key().col, "'side' and 'polygon' must appear together");
    }
    if (side_it != single.end()) {
        const Entry& se = *side_it->second;
        if (static_cast<long>(se.arity()) != n) schema_error(se.line, se.key().col, "'side' needs " + std::to_string(n) + " entries");
        doc.side = int_list(se);
        check_darts(*poly_it->second, 1, doc.num_darts);
        doc.polygon = int_list(*poly_it->second);
        if (auto it = single.find("abelian"); it != single.end()) {
            std::vector<int> v = int_list(*it->second);
            if (v.size() % 2 != 0) schema_error(it->second->line, it->second->key().col, "'abelian' takes pairs");
            for (std::size_t i = 0; i < v.size(); i += 2) doc.abelian.push_back({v[i], v[i + 1]});
        }
        try {
            (void)make_polygon_map(m, doc.side, doc.polygon, doc.abelian);
        } catch (const Error& err) {
            schema_error(se.line, se.key().col, err.what());
        }
    } else if (auto it = single.find("abelian"); it != single.end()) {
        schema_error(it->second->line, it->second->key().col, "'abelian' needs a polygon structure");
    }

    if (auto it = single.find("area"); it != single.end()) {
        const Entry& e = *it->second;
        int interior = m.num_faces() - static_cast<int>(m.boundary_faces().size());
        if (static_cast<int>(e.arity()) != interior) {
            schema_error(e.line, e.key().col, "'area' needs " + std::to_string(interior) + " interior face areas");
        }
        for (std::size_t i = 1; i < e.tokens.size(); ++i) {
            try {
                if (parse_rational(e.tokens[i].text) < 0) schema_error(e.line, e.tokens[i].col, "negative area");
            } catch (const Error& err) {
                if (err.code() == ErrorCode::SchemaError) throw;
                schema_error(e.line, e.tokens[i].col, "bad area '" + e.tokens[i].text + "'");
            }
            doc.areas.push_back(e.tokens[i].text);
        }
    }

    std::set<std::string> names;
    for (const Entry* e : loop_entries) {
        if (e->arity() < 1) schema_error(e->line, e->key().col, "loop needs a name");
        const std::string& name = e->tokens[1].text;
        if (!valid_loop_name(name)) schema_error(e->line, e->tokens[1].col, "bad loop name '" + name + "'");
        if (!names.insert(name).second) schema_error(e->line, e->tokens[1].col, "duplicate loop '" + name + "'");
        check_darts(*e, 2, doc.num_darts);
        std::vector<Dart> darts;
        for (std::size_t i = 2; i < e->tokens.size(); ++i) darts.push_back(static_cast<Dart>(parse_long(*e, e->tokens[i])));
        if (darts.empty()) schema_error(e->line, e->tokens[1].col, "loop '" + name + "' has no darts");
        try {
            (void)make_loop(m, darts);
        } catch (const Error& err) {
            schema_error(e->line, e->tokens[2].col, err.what());
        }
        doc.loops.emplace_back(name, std::move(darts));
    }
    return doc;
}

std::string serialize_map(const MapDocument& doc) {
    std::string out = "ymmf-map " + std::to_string(doc.version) + "\n";
    out += "darts " + std::to_string(doc.num_darts) + "\n";
    append_list(out, "alpha", doc.alpha);
    append_list(out, "sigma", doc.sigma);
    out += doc.clockwise ? "orientation cw\n" : "orientation ccw\n";
    if (!doc.positive.empty()) append_list(out, "positive", doc.positive);
    if (!doc.boundary.empty()) append_list(out, "boundary", doc.boundary);
    if (doc.has_polygon()) {
        append_list(out, "side", doc.side);
        append_list(out, "polygon", doc.polygon);
        if (!doc.abelian.empty()) {
            out += "abelian";
            for (const auto& v : doc.abelian) out += " " + std::to_string(v[0]) + " " + std::to_string(v[1]);
            out += '\n';
        }
    }
    if (!doc.areas.empty()) {
        out += "area";
        for (const std::string& a : doc.areas) out += " " + a;
        out += '\n';
    }
    for (const auto& [name, darts] : doc.loops) append_list(out, "loop " + name, darts);
    return out;
}

MapDocument load_map_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_map(buf.str());
}

MapDocument document_from_map(const CombinatorialMap& m) {
    MapDocument doc;
    doc.num_darts = m.num_darts();
    doc.alpha = m.alpha_table();
    doc.sigma = m.sigma_table();
    doc.positive = m.positive_darts();
    doc.boundary = m.boundary_faces();
    return doc;
}

MapDocument document_from_polygon(const PolygonMap& pm) {
    MapDocument doc = document_from_map(pm.map);
    doc.side = pm.side;
    doc.polygon = pm.polygon_word;
    return doc;
}

AreaVector parse_interior_areas(const CombinatorialMap& m, const std::string& list) {
    std::vector<double> interior;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t comma = list.find(',', start);
        if (comma == std::string::npos) comma = list.size();
        std::string tok = list.substr(start, comma - start);
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (tok.empty()) throw Error(ErrorCode::AreaMismatch, "empty entry in area list '" + list + "'");
        interior.push_back(to_double(parse_rational(tok)));
        start = comma + 1;
    }
    AreaVector a;
    a.values.assign(static_cast<std::size_t>(m.num_faces()), 0.0);
    std::size_t k = 0;
    for (FaceId f = 0; f < m.num_faces(); ++f) {
        if (m.is_boundary(f)) continue;
        if (k >= interior.size()) throw Error(ErrorCode::AreaMismatch, "too few areas for the interior faces");
        a.values[f] = interior[k++];
    }
    if (k != interior.size()) throw Error(ErrorCode::AreaMismatch, "too many areas for the interior faces");
    validate_areas(m, a);
    return a;
}

LoopPath resolve_loop(const MapDocument& doc, const CombinatorialMap& m, const std::string& text) {
    if (const std::vector<Dart>* darts = doc.find_loop(text)) return make_loop(m, *darts);
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == ','; })) {
        std::vector<Dart> darts;
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw Error(ErrorCode::InvalidArgument, "empty dart in '" + text + "'");
            long v = std::stol(tok);
            if (v >= m.num_darts()) throw Error(ErrorCode::DanglingId, "dart " + tok + " does not exist");
            darts.push_back(static_cast<Dart>(v));
        }
        return make_loop(m, darts);
    }
    throw Error(ErrorCode::DanglingId, "no loop named '" + text + "'");
}

std::string format_number(double x) {
    if (x == 0.0) return "0";
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

void RunReport::config(const std::string& key, const std::string& value) { config_.emplace_back(key, value); }

void RunReport::add(ReportItem item) { items_.push_back(std::move(item)); }

void RunReport::gate(const std::string& name, bool passed, const std::string& detail) {
    gates_.push_back({name, {passed, detail}});
}

bool RunReport::conjectural() const {
    return std::any_of(items_.begin(), items_.end(), [](const ReportItem& i) { return i.provenance == "conjectural"; });
}

int RunReport::failed_gates() const {
    return static_cast<int>(std::count_if(gates_.begin(), gates_.end(), [](const auto& g) { return !g.second.first; }));
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string RunReport::markdown() const {
    std::string out = "# ymmf " + command_ + "\n\n";
    if (conjectural()) {
        out += "> **CONJECTURAL**: rows marked `conjectural` come from the higher-genus lifted-loop formula, "
               "which is not a proven limit.\n\n";
    }
    if (!config_.empty()) {
        out += "## Configuration\n\n";
        for (const auto& [k, v] : config_) out += "- " + k + ": `" + v + "`\n";
        out += '\n';
    }
    out += "## Results\n\n| item | value | stderr | provenance | runtime_ms | note |\n|---|---|---|---|---|---|\n";
    for (const ReportItem& i : items_) {
        out += "| " + md_cell(i.item) + " | " + format_number(i.value) + " | " +
               (i.stderr_ ? format_number(*i.stderr_) : "") + " | " + i.provenance + " | " +
               (i.runtime_ms ? format_number(*i.runtime_ms) : "") + " | " + md_cell(i.note) + " |\n";
    }
    if (!gates_.empty()) {
        out += "\n## Gates\n\n";
        for (const auto& [name, res] : gates_) {
            out += std::string("- ") + (res.first ? "PASS " : "FAIL ") + name;
            if (!res.second.empty()) out += ": " + res.second;
            out += '\n';
        }
    }
    return out;
}

std::string RunReport::csv() const {
    std::string out = "item,value,stderr,provenance,runtime_ms\n";
    for (const ReportItem& i : items_) {
        out += csv_field(i.item) + "," + format_number(i.value) + "," + (i.stderr_ ? format_number(*i.stderr_) : "") + "," +
               csv_field(i.provenance) + "," + (i.runtime_ms ? format_number(*i.runtime_ms) : "") + "\n";
    }
    return out;
}

}  // namespace ymmf
