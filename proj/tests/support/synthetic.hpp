#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "seqrec/ingest.hpp"

namespace seqrec::fixtures {

// Users walk contiguous stretches of a few favourite "routes" (fixed venue
// sequences). Each session is one such stretch, sessions are separated by
// multi-day gaps, and each visit is swapped for a random venue with
// probability `noise`.
struct PlantedRouteConfig {
  std::size_t users = 200;
  std::size_t venues = 300;
  std::size_t routes = 20;
  std::size_t min_route_length = 4;
  std::size_t max_route_length = 6;
  std::size_t routes_per_user = 3;
  std::size_t min_sessions = 10;
  std::size_t max_sessions = 16;
  std::size_t min_session_length = 2;
  double noise = 0.05;
  std::uint64_t seed = 7;
  // Within-session gaps are drawn below this, between-session gaps far
  // above it.
  Timestamp delta_t = 5 * 3600;
};

struct PlantedRoutes {
  Dataset dataset;
  std::vector<std::vector<VenueId>> routes;
  std::map<UserId, std::vector<std::size_t>> favourites;
};

PlantedRoutes generate_planted_routes(const PlantedRouteConfig& cfg);

std::string venue_name(std::size_t i);

}  // namespace seqrec::fixtures
