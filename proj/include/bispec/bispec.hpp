#pragma once

#include "bispec/errors.hpp"
#include "bispec/scalar.hpp"
#include "bispec/poly.hpp"
#include "bispec/ratfunc.hpp"
#include "bispec/pfrac.hpp"
#include "bispec/mat.hpp"
#include "bispec/psido.hpp"
#include "bispec/diffop.hpp"
#include "bispec/quasiexp.hpp"
#include "bispec/qedata.hpp"
#include "bispec/linalg.hpp"
#include "bispec/tilde.hpp"
#include "bispec/fermion.hpp"
#include "bispec/io.hpp"
#include "bispec/harness.hpp"
