#pragma once

#include <stdexcept>
#include <string>

namespace kvlie {

/// Operands live in different ambient algebras (alphabet or truncation differ).
class AmbientMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An associative series handed to the word -> Lie conversion is not primitive.
class NotPrimitive : public std::domain_error {
public:
    NotPrimitive(int degree, const std::string& what)
        : std::domain_error(what), degree_(degree) {}
    /// Lowest degree at which the Lyndon triangular solve failed.
    int degree() const noexcept { return degree_; }

private:
    int degree_;
};

/// Automorphism images are not conjugates of the generators.
class NotTangential : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A degree-by-degree linear system has no solution.
class Infeasible : public std::runtime_error {
public:
    Infeasible(int degree, const std::string& what)
        : std::runtime_error(what), degree_(degree) {}
    int degree() const noexcept { return degree_; }

private:
    int degree_;
};

}  // namespace kvlie
