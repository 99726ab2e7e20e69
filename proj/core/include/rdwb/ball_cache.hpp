#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "rdwb/ball.hpp"

namespace rdwb {

inline constexpr int kBallCacheVersion = 1;

// Text format:
//   rdwb-ball <version> <descriptor> <generator order> <radius>
//   <normal form> <length> <parent rank>      one line per element, rank order
//   end <element count>
// The identity is written as "1" with parent rank -1.
void write_ball(std::ostream& out, const BallIndex& ball);
void save_ball(const BallIndex& ball, const std::filesystem::path& path);

// Throws IntegrityError on a version, descriptor or order mismatch against
// `expected`, and on truncated or corrupt content.
BallIndex read_ball(std::istream& in,
                    const std::optional<GroupModel>& expected = std::nullopt);
BallIndex load_ball(const std::filesystem::path& path,
                    const std::optional<GroupModel>& expected = std::nullopt);

// File name used inside a cache directory for (model, radius).
std::filesystem::path ball_cache_path(const std::filesystem::path& dir,
                                      const GroupModel& model, int radius);

// Loads from `dir` when a matching file exists, otherwise enumerates and
// stores the result there.
BallIndex cached_ball(const std::filesystem::path& dir, const GroupModel& model,
                      int radius, std::size_t budget = kDefaultBallBudget);

}  // namespace rdwb
