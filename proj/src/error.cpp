#include "ymmf/error.hpp"

namespace ymmf {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotInvolution: return "NotInvolution";
        case ErrorCode::NotPermutation: return "NotPermutation";
        case ErrorCode::NegativeGenus: return "NegativeGenus";
        case ErrorCode::BoundaryAdjacent: return "BoundaryAdjacent";
        case ErrorCode::HasBoundary: return "HasBoundary";
        case ErrorCode::NotALoop: return "NotALoop";
        case ErrorCode::InvalidPath: return "InvalidPath";
        case ErrorCode::EdgeReused: return "EdgeReused";
        case ErrorCode::VertexOverused: return "VertexOverused";
        case ErrorCode::NotACrossing: return "NotACrossing";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::BasisNotIndependent: return "BasisNotIndependent";
        case ErrorCode::NonZeroHomology: return "NonZeroHomology";
        case ErrorCode::NotTame: return "NotTame";
        case ErrorCode::NegativeOrder: return "NegativeOrder";
        case ErrorCode::UnknownGenerator: return "UnknownGenerator";
        case ErrorCode::WrongBoundaryCount: return "WrongBoundaryCount";
        case ErrorCode::NotOnMap: return "NotOnMap";
        case ErrorCode::WrongGenus: return "WrongGenus";
        case ErrorCode::AreaMismatch: return "AreaMismatch";
        case ErrorCode::BoundaryOfSimplex: return "BoundaryOfSimplex";
        case ErrorCode::NotRegularWrtPolygon: return "NotRegularWrtPolygon";
        case ErrorCode::NoPolygonStructure: return "NoPolygonStructure";
        case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
        case ErrorCode::NotInGroup: return "NotInGroup";
        case ErrorCode::NegativeTime: return "NegativeTime";
        case ErrorCode::ClosureExplosion: return "ClosureExplosion";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::DanglingId: return "DanglingId";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace ymmf
