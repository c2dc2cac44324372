#pragma once

#include "doctest.h"
#include "test_helpers.hpp"

#define CHECK_REL(got, want, tol)                   \
  do {                                              \
    const double cr_got = (got);                    \
    const double cr_want = (want);                  \
    CAPTURE(cr_got);                                \
    CAPTURE(cr_want);                               \
    CHECK(test::close_rel(cr_got, cr_want, (tol))); \
  } while (0)

#define CHECK_ABS(got, want, tol)                   \
  do {                                              \
    const double ca_got = (got);                    \
    const double ca_want = (want);                  \
    CAPTURE(ca_got);                                \
    CAPTURE(ca_want);                               \
    CHECK(test::close_abs(ca_got, ca_want, (tol))); \
  } while (0)

#define CHECK_THROWS_WITH_SUBSTR(expr, ex_type, substr)              \
  do {                                                               \
    bool threw_right_type = false;                                   \
    std::string what_msg;                                            \
    try {                                                            \
      (void)(expr);                                                  \
    } catch (const ex_type& e) {                                     \
      threw_right_type = true;                                       \
      what_msg = e.what();                                           \
    } catch (const std::exception& e) {                              \
      what_msg = e.what();                                           \
    }                                                                \
    CAPTURE(what_msg);                                               \
    CHECK(threw_right_type);                                         \
    CHECK(what_msg.find(substr) != std::string::npos);               \
  } while (0)
