#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace hierstab {

enum class Var { S, Q };

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t at)
        : std::runtime_error(what + " at offset " + std::to_string(at)), offset(at) {}
    std::size_t offset;
};

class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, std::size_t at)
        : std::runtime_error(what), offset(at) {}
    std::size_t offset;  // source offset of the offending node, or npos for derived nodes
};

/// Immutable expression over the variables s and Q: arithmetic, integer powers,
/// exp/log/sin/cos/sqrt, and piecewise(cond, then, else) with a comparison
/// condition that may depend on s or on Q but not both. Closed under the
/// symbolic derivative operators d/ds and d/dQ.
class Expr {
public:
    static Expr parse(const std::string& src);
    static Expr number(double v);

    double eval(double s, double q) const;
    Expr diff(Var v) const;
    std::string str() const;
    bool uses(Var v) const;
    bool is_zero() const;  // literal 0 after constant folding

    struct Node;
    using NodeP = std::shared_ptr<const Node>;
    explicit Expr(NodeP n) : node_(std::move(n)) {}
    const Node& node() const { return *node_; }

private:
    NodeP node_;
};

}  // namespace hierstab
