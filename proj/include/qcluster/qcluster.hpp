#ifndef QCLUSTER_QCLUSTER_HPP
#define QCLUSTER_QCLUSTER_HPP

// Umbrella header for the quasi-cluster engine.

#include "qcluster/cover.hpp"
#include "qcluster/explorer.hpp"
#include "qcluster/frieze.hpp"
#include "qcluster/gluing.hpp"
#include "qcluster/hyperbolic.hpp"
#include "qcluster/io.hpp"
#include "qcluster/laurent.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/surface.hpp"

namespace qcluster {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qcluster

#endif  // QCLUSTER_QCLUSTER_HPP
