#ifndef SQT_EXEMPLAR_EIGEN_COMPAT_HPP
#define SQT_EXEMPLAR_EIGEN_COMPAT_HPP

// glibc's <resolv.h> (reached via the HTTP library's socket includes)
// defines _res as a macro, which collides with Eigen parameter names.
#ifdef _res
#undef _res
#endif

#include <Eigen/Dense>

#endif
