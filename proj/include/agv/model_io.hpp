#pragma once

// Line-oriented text format for systems and assumptions.
//
//   domain 3
//   agent train1
//     statevars x1
//     inputvars s
//     state w x1=0
//     init w
//     trans w -> t when s=1
//     choice w: t when s=1; w when s=0|2
//   end
//   assumption A012
//     ... same keywords, plus
//     accepting r g1 g2
//   end

#include <string>

#include "agv/core.hpp"
#include "agv/generators.hpp"

namespace agv
{

class ModelParseError : public ModelError
{
public:
    ModelParseError(int line, const std::string& msg)
        : ModelError("line " + std::to_string(line) + ": " + msg), line_(line)
    {
    }
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// Parses a model file; omitted input pairs become self-loops and omitted
/// repertoires default to one singleton choice per transition.
Benchmark parse_model_file(const std::string& text);

Benchmark load_model_file(const std::string& path);

std::string serialize(const Benchmark& b);
std::string serialize_module(const Module& m, const std::string& indent = "  ");

/// Builtin names: tgcN, robotsR_L_E (suffix _split for the second layout); anything else is a path.
Benchmark load_model(const std::string& spec);

/// Looks an assumption up by name, ignoring underscores ("A_012" finds "A012").
const Assumption* find_assumption(const Benchmark& b, const std::string& name);

} // namespace agv
