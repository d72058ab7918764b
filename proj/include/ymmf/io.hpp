#ifndef YMMF_IO_HPP
#define YMMF_IO_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ymmf/cover.hpp"
#include "ymmf/map.hpp"
#include "ymmf/planar.hpp"
#include "ymmf/rational.hpp"

namespace ymmf {

/**
 * Text map document, version 1. One `key value...` entry per line, `#`
 * starts a comment:
 *
 *     ymmf-map 1
 *     darts 4
 *     alpha 1 0 3 2
 *     sigma 2 3 1 0
 *     orientation ccw
 *     positive 0 2
 *     boundary 0
 *     side 0 0 0 0
 *     polygon 0 2 1 3
 *     abelian 1 0 0 1
 *     area 1 1/2
 *     loop L 0 2
 *
 * `darts`, `alpha` and `sigma` are required. `area` lists the interior
 * faces in face-id order. `side` and `polygon` together give a polygon
 * structure on a closed map; `abelian` fixes the genus-one image in Z^2.
 */
struct MapDocument {
    int version = 1;
    int num_darts = 0;
    std::vector<Dart> alpha, sigma;
    bool clockwise = false;
    std::vector<Dart> positive;
    std::vector<FaceId> boundary;
    std::vector<int> side;
    std::vector<Dart> polygon;
    std::vector<std::array<long, 2>> abelian;
    std::vector<std::string> areas;
    std::vector<std::pair<std::string, std::vector<Dart>>> loops;

    bool operator==(const MapDocument& o) const;
    bool has_polygon() const { return !side.empty(); }

    CombinatorialMap build() const;
    PolygonMap polygon_map() const;
    std::vector<Rational> area_values() const;
    /** Interior areas spread over all faces; boundary faces get 0. */
    AreaVector area_vector(const CombinatorialMap& m) const;
    const std::vector<Dart>* find_loop(const std::string& name) const;
};

MapDocument parse_map(const std::string& text);
std::string serialize_map(const MapDocument& doc);
MapDocument load_map_file(const std::string& path);

/** Document for an existing map; sigma is written counterclockwise. */
MapDocument document_from_map(const CombinatorialMap& m);
MapDocument document_from_polygon(const PolygonMap& pm);

/** Parses "a,b,c" (decimals or p/q) into interior areas for m. */
AreaVector parse_interior_areas(const CombinatorialMap& m, const std::string& list);

/** Loop by name, or by an explicit dart list such as "0,2,1,3". */
LoopPath resolve_loop(const MapDocument& doc, const CombinatorialMap& m, const std::string& text);

struct ReportItem {
    std::string item;
    double value = 0.0;
    std::optional<double> stderr_;
    std::string provenance;
    std::optional<double> runtime_ms;
    std::string note;
};

/** Markdown and CSV rendering of a command's results. */
class RunReport {
public:
    explicit RunReport(std::string command) : command_(std::move(command)) {}

    void config(const std::string& key, const std::string& value);
    void add(ReportItem item);
    void gate(const std::string& name, bool passed, const std::string& detail);

    const std::vector<ReportItem>& items() const { return items_; }
    bool conjectural() const;
    int failed_gates() const;

    std::string markdown() const;
    std::string csv() const;

private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> config_;
    std::vector<ReportItem> items_;
    std::vector<std::pair<std::string, std::pair<bool, std::string>>> gates_;
};

/** Shortest round-trip decimal; -0 prints as 0. */
std::string format_number(double x);

}  // namespace ymmf

#endif
