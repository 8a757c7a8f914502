#pragma once

// The core library is built twice in the test tree: once normally and once
// with a deliberately broken operator kernel. Each build lives in its own
// inline namespace so both can be linked into a single binary.
#ifndef QCALC_VARIANT_NS
#define QCALC_VARIANT_NS v1
#endif

#define QCALC_NS_BEGIN                  \
  namespace qcalc {                     \
  inline namespace QCALC_VARIANT_NS {

#define QCALC_NS_END \
  }                  \
  }
