#include "rivulet/rr_collection.hpp"

#include "rivulet/rr_ic.hpp"
#include "rivulet/rr_lt.hpp"

namespace rivulet {

std::unique_ptr<RrCollectionBase> make_collection(const DynamicGraph* g, Rng rng) {
  if (g->model() == Model::LT) return std::make_unique<LtCollection>(g, rng);
  return std::make_unique<IcCollection>(g, rng);
}

}  // namespace rivulet
