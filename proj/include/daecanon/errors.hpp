#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dae {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. Carries the byte offset of the
/// failure and a description of what would have been accepted there.
struct ParseError : Error {
    ParseError(std::size_t offset_, std::string expected_)
        : Error("parse error at offset " + std::to_string(offset_) +
                ": expected " + expected_),
          offset(offset_),
          expected(std::move(expected_)) {}
    std::size_t offset;
    std::string expected;
};

struct UnboundParameterError : Error {
    explicit UnboundParameterError(const std::string& name)
        : Error("unbound parameter '" + name + "'"), parameter(name) {}
    std::string parameter;
};

struct NonfiniteResultError : Error {
    using Error::Error;
};

/// Two subspaces expected to be complementary are not, at the working
/// tolerance.
struct ComplementError : Error {
    explicit ComplementError(const std::string& what_, int node_ = -1)
        : Error(what_), node(node_) {}
    int node;  // grid node index, -1 when not tied to a grid
};

/// A constant pair failed the regular-pencil test (or a derived
/// construction detected the failure late).
struct NotRegularError : Error {
    using Error::Error;
};

/// A rank decision changed across grid nodes where a constant rank was
/// required: either a genuine rank change or an unsuitable tolerance.
struct RankDriftError : Error {
    RankDriftError(std::string what_, std::vector<int> nodes_ = {})
        : Error(std::move(what_)), nodes(std::move(nodes_)) {}
    std::vector<int> nodes;
};

struct SingularTransformError : Error {
    SingularTransformError(const std::string& what_, int node_)
        : Error(what_ + " (node " + std::to_string(node_) + ")"), node(node_) {}
    int node;
};

struct SingularF22Error : Error {
    explicit SingularF22Error(int node_)
        : Error("F22 block singular at grid node " + std::to_string(node_)),
          node(node_) {}
    int node;
};

/// The flow subspace is trivial (terminal rank zero): there is no basis to
/// return and the only homogeneous solution is x == 0.
struct ZeroFlowError : Error {
    ZeroFlowError() : Error("S_can is trivial (terminal rank zero)") {}
};

/// The adjoint pair failed to reproduce the characteristics of the original
/// pair; theory forbids this, so it indicates a numerical breakdown.
struct AdjointNotRegularError : Error {
    using Error::Error;
};

struct NotRegularTractabilityError : Error {
    using Error::Error;
};

struct InvalidProfileError : Error {
    using Error::Error;
};

}  // namespace dae
