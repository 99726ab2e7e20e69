#include "rdwb/ball_cache.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rdwb/error.hpp"

namespace rdwb {

void write_ball(std::ostream& out, const BallIndex& ball) {
  const GroupModel& m = ball.model();
  out << "rdwb-ball " << kBallCacheVersion << ' ' << m.descriptor() << ' '
      << m.order_string() << ' ' << ball.radius() << '\n';
  for (std::size_t r = 0; r < ball.size(); ++r) {
    const auto rank = static_cast<Rank>(r);
    out << m.format_word(ball.word(rank)) << ' ' << ball.length(rank) << ' ';
    if (r == 0) {
      out << -1;
    } else {
      out << ball.parent(rank);
    }
    out << '\n';
  }
  out << "end " << ball.size() << '\n';
}

void save_ball(const BallIndex& ball, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write ball cache " + path.string());
  write_ball(out, ball);
  if (!out) throw IoError("failed writing ball cache " + path.string());
}

BallIndex read_ball(std::istream& in, const std::optional<GroupModel>& expected) {
  std::string line;
  if (!std::getline(in, line)) throw IntegrityError("ball cache is empty");
  std::istringstream header(line);
  std::string magic, descriptor, order;
  int version = 0;
  int radius = -1;
  if (!(header >> magic >> version >> descriptor >> order >> radius) ||
      magic != "rdwb-ball") {
    throw IntegrityError("ball cache header is malformed");
  }
  if (version != kBallCacheVersion) {
    throw IntegrityError("ball cache version " + std::to_string(version) +
                         " is not supported (expected " +
                         std::to_string(kBallCacheVersion) + ")");
  }
  GroupModel model = [&] {
    try {
      return GroupModel::parse(descriptor, order);
    } catch (const Error& e) {
      throw IntegrityError(std::string("ball cache model: ") + e.what());
    }
  }();
  if (expected && (expected->descriptor() != model.descriptor() ||
                   expected->order_string() != model.order_string())) {
    throw IntegrityError("ball cache was written for " + model.descriptor() +
                         " with order " + model.order_string() +
                         ", expected " + expected->descriptor() +
                         " with order " + expected->order_string());
  }

  std::vector<Rank> parents;
  std::vector<Letter> letters;
  bool saw_end = false;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string first;
    if (!(row >> first)) throw IntegrityError("blank line in ball cache");
    if (first == "end") {
      std::size_t count = 0;
      if (!(row >> count) || count != parents.size()) {
        throw IntegrityError("ball cache element count does not match trailer");
      }
      saw_end = true;
      break;
    }
    long length = -1;
    long parent = -2;
    if (!(row >> length >> parent)) {
      throw IntegrityError("ball cache row " + std::to_string(parents.size()) +
                           " is malformed");
    }
    Word w;
    try {
      w = model.parse_word(first);
    } catch (const Error& e) {
      throw IntegrityError(std::string("ball cache row: ") + e.what());
    }
    if (static_cast<long>(w.size()) != length) {
      throw IntegrityError("ball cache row " + std::to_string(parents.size()) +
                           " has an inconsistent length");
    }
    if (parents.empty()) {
      if (parent != -1 || !w.empty()) {
        throw IntegrityError("ball cache must start with the identity");
      }
      parents.push_back(kNoRank);
      letters.push_back(0);
      continue;
    }
    if (parent < 0 || static_cast<std::size_t>(parent) >= parents.size() ||
        w.empty()) {
      throw IntegrityError("ball cache row " + std::to_string(parents.size()) +
                           " has an invalid parent");
    }
    // The row's word must spell the parent chain.
    Rank cur = static_cast<Rank>(parent);
    for (std::size_t i = w.size() - 1; i > 0; --i) {
      if (cur == kNoRank || cur == 0 || letters[cur] != w[i - 1]) {
        throw IntegrityError("ball cache row " +
                             std::to_string(parents.size()) +
                             " does not extend its parent");
      }
      cur = parents[cur];
    }
    if (cur != 0) {
      throw IntegrityError("ball cache row " + std::to_string(parents.size()) +
                           " does not extend its parent");
    }
    parents.push_back(static_cast<Rank>(parent));
    letters.push_back(w.back());
  }
  if (!saw_end) throw IntegrityError("ball cache is truncated");

  BallIndex ball = BallIndex::from_records(model, radius, std::move(parents),
                                           std::move(letters));
  return ball;
}

BallIndex load_ball(const std::filesystem::path& path,
                    const std::optional<GroupModel>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot open ball cache " + path.string());
  return read_ball(in, expected);
}

std::filesystem::path ball_cache_path(const std::filesystem::path& dir,
                                      const GroupModel& model, int radius) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : model.descriptor() + "|" + model.order_string()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char name[64];
  std::snprintf(name, sizeof name, "ball-%016llx-r%d.txt",
                static_cast<unsigned long long>(h), radius);
  return dir / name;
}

BallIndex cached_ball(const std::filesystem::path& dir, const GroupModel& model,
                      int radius, std::size_t budget) {
  const auto path = ball_cache_path(dir, model, radius);
  if (std::filesystem::exists(path)) {
    BallIndex cached = load_ball(path, model);
    if (cached.size() > budget) {
      throw ResourceError("cached ball of " + std::to_string(cached.size()) +
                          " elements exceeds the budget of " + std::to_string(budget));
    }
    return cached;
  }
  BallIndex ball = BallIndex::enumerate(model, radius, budget);
  std::filesystem::create_directories(dir);
  save_ball(ball, path);
  return ball;
}

}  // namespace rdwb
