#include "ymmf/builders.hpp"

#include <unordered_map>

namespace ymmf {

namespace {

int h_edge(int cols, int i, int j) { return j * cols + i; }
int v_edge(int cols, int rows, int i, int j) { return cols * (rows + 1) + j * (cols + 1) + i; }

}  // namespace

Dart GridMap::east(int i, int j) const {
    if (i < 0 || i >= cols || j < 0 || j > rows) throw Error(ErrorCode::NotOnMap, "no east edge there");
    return 2 * h_edge(cols, i, j);
}

Dart GridMap::north(int i, int j) const {
    if (i < 0 || i > cols || j < 0 || j >= rows) throw Error(ErrorCode::NotOnMap, "no north edge there");
    return 2 * v_edge(cols, rows, i, j);
}

VertexId GridMap::vertex(int i, int j) const {
    if (i < cols) return map.tail(east(i, j));
    return map.head(east(i - 1, j));
}

LoopPath GridMap::walk(int i, int j, const std::string& moves) const {
    std::vector<Dart> darts;
    for (char c : moves) {
        switch (c) {
            case 'R': darts.push_back(east(i, j)); ++i; break;
            case 'L': darts.push_back(west(i, j)); --i; break;
            case 'U': darts.push_back(north(i, j)); ++j; break;
            case 'D': darts.push_back(south(i, j)); --j; break;
            default: throw Error(ErrorCode::InvalidArgument, std::string("unknown move ") + c);
        }
    }
    return make_path(map, std::move(darts));
}

GridMap grid_map(int cols, int rows) {
    if (cols < 1 || rows < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one square");
    const int n = 2 * (cols * (rows + 1) + (cols + 1) * rows);
    std::vector<std::vector<Dart>> rotations;
    for (int j = 0; j <= rows; ++j) {
        for (int i = 0; i <= cols; ++i) {
            std::vector<Dart> rot;
            if (i < cols) rot.push_back(2 * h_edge(cols, i, j));
            if (j < rows) rot.push_back(2 * v_edge(cols, rows, i, j));
            if (i > 0) rot.push_back(2 * h_edge(cols, i - 1, j) + 1);
            if (j > 0) rot.push_back(2 * v_edge(cols, rows, i, j - 1) + 1);
            rotations.push_back(rot);
        }
    }
    GridMap g;
    g.cols = cols;
    g.rows = rows;
    g.map = build_map(paired_alpha(n), sigma_from_rotations(n, rotations));
    g.map = g.map.with_boundary({g.outer()});
    return g;
}

CombinatorialMap simple_loop_map() {
    CombinatorialMap m = build_map(paired_alpha(2), {1, 0});
    return m.with_boundary({m.left_face(1)});
}

CombinatorialMap figure_eight_map() {
    CombinatorialMap m = build_map(paired_alpha(4), sigma_from_rotations(4, {{0, 2, 3, 1}}));
    return m.with_boundary({m.left_face(0)});
}

CombinatorialMap one_face_map(const std::vector<Dart>& word) {
    const int n = static_cast<int>(word.size());
    std::unordered_map<Dart, Dart> prev;
    for (int k = 0; k < n; ++k) prev[word[k]] = word[(k + n - 1) % n];
    if (static_cast<int>(prev.size()) != n) throw Error(ErrorCode::InvalidArgument, "face word repeats a dart");
    std::vector<Dart> sigma(n, -1);
    for (Dart y = 0; y < n; ++y) {
        auto it = prev.find(y);
        if (it == prev.end()) throw Error(ErrorCode::DanglingId, "face word misses dart " + std::to_string(y));
        sigma[y] = it->second ^ 1;
    }
    return build_map(paired_alpha(n), std::move(sigma));
}

}  // namespace ymmf
