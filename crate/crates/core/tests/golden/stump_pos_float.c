/* flint codegen: 1 trees, 4 features, 2 classes, f32, float */

#include <stdint.h>
#include <string.h>

static const double tree_0_leaves[2][2] = {
 {1.0, 0.0},
 {0.0, 1.0}
};

static const double *tree_0(const float *pX) {
 if(pX[3] <= 10.0743475f){
  return tree_0_leaves[0];
 } else {
  return tree_0_leaves[1];
 }
}

int predict_ensemble(const float *pX, double *scores) {
 const double *leaf;
 int c, best = 0;
 for(c = 0; c < 2; ++c) scores[c] = 0.0;
 leaf = tree_0(pX);
 for(c = 0; c < 2; ++c) scores[c] += leaf[c];
 for(c = 1; c < 2; ++c){
  if(scores[c] > scores[best]) best = c;
 }
 return best;
}
