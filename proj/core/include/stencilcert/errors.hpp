#ifndef STENCILCERT_ERRORS_HPP
#define STENCILCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stencilcert {

/** Base class for all library errors. */
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/** A derivative order was requested beyond what the kernel family supports. */
class smoothness_error : public error {
 public:
  explicit smoothness_error(const std::string& what) : error(what) {}
};

/**
 * The polynomial moment system has no solution: the requested operator
 * value at the center cannot be matched by any weights on the given nodes.
 */
class inconsistent_moment_system : public error {
 public:
  inconsistent_moment_system(const std::string& what, double residual,
                             int worst_moment)
      : error(what), residual_(residual), worst_moment_(worst_moment) {}

  double residual() const { return residual_; }
  /** Index (in graded-lex basis order) of the most violated moment. */
  int worst_moment() const { return worst_moment_; }

 private:
  double residual_;
  int worst_moment_;
};

/** The saddle system could not be solved to working accuracy. */
class singular_saddle_system : public error {
 public:
  explicit singular_saddle_system(const std::string& what) : error(what) {}
};

}  // namespace stencilcert

#endif
