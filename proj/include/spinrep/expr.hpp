#pragma once

#include <memory>
#include <string>

#include "spinrep/grid.hpp"

namespace spinrep {

// Arithmetic expressions over the conformal coordinate: literals, i, z, zbar,
// + - * / ^, parentheses, and the functions
// exp log sin cos tan sinh cosh tanh sqrt conj re im abs.
class Expr {
  public:
    explicit Expr(const std::string& text);
    ~Expr();
    Expr(Expr&&) noexcept;
    Expr& operator=(Expr&&) noexcept;

    cplx eval(cplx z) const;
    Field<cplx> eval(const Domain& dom) const;

    struct Node;

  private:
    std::unique_ptr<Node> root_;
};

}  // namespace spinrep
