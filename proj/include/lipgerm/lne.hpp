#pragma once

#include "lipgerm/surface.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lipgerm {

enum class Mode { Gauss, Annotated };
Mode parse_mode(const std::string& s);  // InvalidMode
std::string to_string(Mode m);

enum class PairStatus { Holds, Fails, Undecided };
std::string to_string(PairStatus s);

struct PairVerdict {
    std::string node;
    std::string e1, e2;
    Rational q_inn;
    std::optional<Rational> q_out;  // from an annotation
    std::string q_out_symbolic;     // "equal" / "greater" when decided combinatorially
    PairStatus status = PairStatus::Undecided;
    bool delta_node_informative = false;
    std::string decided_by;  // "gauss", "annotation" or empty
    std::vector<std::string> trace;
};

struct Witness {
    std::string condition;  // "1*", "2*", "undecided"
    std::string node;
    std::string details;
};

enum class LneResult { LNE, NOT_LNE, UNDECIDED };
std::string to_string(LneResult r);

struct LneVerdict {
    LneResult result = LneResult::LNE;
    Mode mode = Mode::Gauss;
    bool strict_theorem = false;
    std::vector<Witness> witnesses;
    std::vector<PairVerdict> pairs;
};

struct Condition1Violation {
    std::string node;
    std::string entry;
    long degree;
    long mult_hat;
    long m;
};

std::vector<Condition1Violation> check_condition1(const SurfaceGerm& s);

// Inner contact of two lifted arcs at Fhat vertices: bottleneck with witness path and minimizing vertex.
Bottleneck pair_q_inn(const SurfaceGerm& s, const std::string& v1, const std::string& v2);
Rational q_inn_resolution(const RateGraph& gtilde, const std::string& v, const std::string& w);

PairVerdict check_pair_condition2(const SurfaceGerm& s, const std::string& node, const LiftEntry& e1,
                                  const LiftEntry& e2, Mode mode);

// Strict-theorem mode ignores failures at Δ-nodes.
LneVerdict check_lne(const SurfaceGerm& s, Mode mode, bool strict_theorem = false);
LneVerdict check_lne_serial(const SurfaceGerm& s, Mode mode, bool strict_theorem = false);

std::string verdict_json(const LneVerdict& v);

}  // namespace lipgerm
