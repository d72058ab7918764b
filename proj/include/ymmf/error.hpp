#ifndef YMMF_ERROR_HPP
#define YMMF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ymmf {

enum class ErrorCode {
    NotInvolution = 1,
    NotPermutation,
    NegativeGenus,
    BoundaryAdjacent,
    HasBoundary,
    NotALoop,
    InvalidPath,
    EdgeReused,
    VertexOverused,
    NotACrossing,
    DegreeMismatch,
    BasisNotIndependent,
    NonZeroHomology,
    NotTame,
    NegativeOrder,
    UnknownGenerator,
    WrongBoundaryCount,
    NotOnMap,
    WrongGenus,
    AreaMismatch,
    BoundaryOfSimplex,
    NotRegularWrtPolygon,
    NoPolygonStructure,
    UnsupportedFamily,
    NotInGroup,
    NegativeTime,
    ClosureExplosion,
    SchemaError,
    DanglingId,
    InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ymmf

#endif
