#ifndef QCLUST_QCLUST_HPP
#define QCLUST_QCLUST_HPP

#include "qclust/assignment.hpp"
#include "qclust/error.hpp"
#include "qclust/evaluation.hpp"
#include "qclust/fixture.hpp"
#include "qclust/pipeline.hpp"
#include "qclust/profiles.hpp"
#include "qclust/qubo.hpp"
#include "qclust/solvers.hpp"

#endif  // QCLUST_QCLUST_HPP
