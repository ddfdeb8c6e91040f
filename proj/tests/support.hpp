#pragma once

#include <doctest.h>

#include <initializer_list>
#include <string>

#include "pathdep/dag.hpp"
#include "pathdep/error.hpp"

namespace fixture {

using pathdep::Dag;

inline Dag fork3() { return Dag::build({"X", "A", "C"}, {{"X", "A"}, {"X", "C"}}); }

// X -> A, X -> C, X -> Z' -> Z
inline Dag fork() {
    return Dag::build({"A", "X", "C", "Z'", "Z"}, {{"X", "A"}, {"X", "C"}, {"X", "Z'"}, {"Z'", "Z"}});
}

// A -> X <- C, X -> Z' -> Z
inline Dag collider() {
    return Dag::build({"A", "C", "X", "Z'", "Z"}, {{"A", "X"}, {"C", "X"}, {"X", "Z'"}, {"Z'", "Z"}});
}

inline Dag diamond() {
    return Dag::build({"A", "B", "C", "D"}, {{"A", "B"}, {"A", "D"}, {"B", "C"}, {"D", "C"}});
}

inline pathdep::VertexSet set(const Dag& g, std::initializer_list<const char*> names) {
    pathdep::VertexSet out;
    for (const char* n : names) out.insert(g.at(n));
    return out;
}

}  // namespace fixture

#define CHECK_CODE(expr, expected_code)                               \
    do {                                                              \
        bool thrown_ = false;                                         \
        try {                                                         \
            (void)(expr);                                             \
        } catch (const pathdep::Error& e_) {                          \
            thrown_ = true;                                           \
            CHECK_MESSAGE(e_.code() == (expected_code), e_.what());   \
        }                                                             \
        CHECK_MESSAGE(thrown_, "expected " #expected_code);           \
    } while (0)
