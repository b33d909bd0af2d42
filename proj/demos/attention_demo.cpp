// Builds an attention map for a hand-written landmark set, prints it as
// ASCII shading and writes demo.pgm next to the binary.

#include <fstream>
#include <iostream>

#include "battn/attention.hpp"
#include "battn/raster.hpp"

int main() {
  battn::LandmarkSet lm;
  lm.image_id = "demo";
  lm.points = {
      {10, 6, battn::Visibility::visible},   {52, 8, battn::Visibility::visible},
      {58, 30, battn::Visibility::occluded}, {40, 56, battn::Visibility::visible},
      {14, 52, battn::Visibility::visible},  {30, 28, battn::Visibility::visible},  // interior, gets dropped
  };

  battn::AttentionConfig cfg;
  cfg.blur = battn::BlurConfig::fixed(2.0);
  const battn::Grid map = battn::build_attention_map(lm, 64, 64, cfg);

  const char* shades = " .:-=+*#%@";
  for (int y = 0; y < map.height; y += 2) {  // halve rows: terminal cells are tall
    for (int x = 0; x < map.width; ++x) {
      const int s = int(map.at(x, y) * 9.0 + 0.5);
      std::cout << shades[s];
    }
    std::cout << "\n";
  }

  std::ofstream out("demo.pgm", std::ios::binary);
  const std::string pgm = battn::encode_pgm(map);
  out.write(pgm.data(), std::streamsize(pgm.size()));
  std::cout << "wrote demo.pgm (" << map.width << "x" << map.height << ")\n";
  return 0;
}
