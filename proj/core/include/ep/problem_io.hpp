#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ep/problems.hpp"

namespace ep {

/// Version tag written into every problem file.
inline constexpr std::string_view kProblemFormat = "ep-problem/1";

struct ProblemFile {
    std::string kind;  // "nash-cournot", "integral-vip" or "toy"
    std::optional<std::uint64_t> seed;
    ProblemInstance problem;
};

// Serialization is deterministic: equal instances give byte-identical text.
// Matrices are stored as {"rows", "cols", "data"} with data in row-major order.
std::string problem_to_json(const NashCournotInstance& inst);
std::string problem_to_json(const IntegralVipInstance& inst);
std::string toy_problem_json(double x0 = 1.0, double x1 = 1.0);

/// Throws IoError on malformed text, InvalidArgument on inconsistent content.
ProblemFile parse_problem_json(std::string_view text);
ProblemFile load_problem_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace ep
