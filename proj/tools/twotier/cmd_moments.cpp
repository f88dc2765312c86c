#include <iostream>

#include "common.hpp"
#include "twotier/channel.hpp"

namespace twotier::cli {

int run_moments(RunContext& ctx) {
  const CommonOptions& o = ctx.opts();
  CompoundMarkSpec spec =
      compound_mark_spec(ctx.params(), o.seed, o.moment_samples);

  std::string path;
  if (!o.moments_cache.empty()) {
    std::filesystem::create_directories(o.moments_cache);
    path = (std::filesystem::path(o.moments_cache) /
            ("moments-" + hex16(params_hash(ctx.params())) + ".csv"))
               .string();
  } else {
    path = (ctx.run_dir() / "moments.csv").string();
  }
  ShadowMoments law = ShadowMoments::load_or_estimate(spec, path);

  nlohmann::json rec = {{"subcommand", "moments"},
                        {"sigma_db", spec.sigma_db},
                        {"mean_users", spec.mean_users},
                        {"order", spec.order},
                        {"samples", spec.samples},
                        {"moment", law.moment()},
                        {"mean", law.mean()},
                        {"path", path}};
  ctx.annotate({{"moments", rec}});
  ctx.finish();
  std::cout << rec.dump() << "\n";
  return 0;
}

}  // namespace twotier::cli
