/* flint codegen: 1 trees, 126 features, 2 classes, f32, flint */

#include <stdint.h>
#include <string.h>

#define FLINT_SIGN_MASK (-2147483647 - 1)
typedef char flint_int_is_32_bits[sizeof(int) == 4 ? 1 : -1];

static const double tree_0_leaves[2][2] = {
 {0.25, 0.75},
 {0.5, 0.5}
};

static const double *tree_0(const void *pX) {
 if(((int)(0x403bddde))<=((*(((int *)(pX))+125))^FLINT_SIGN_MASK)){
  return tree_0_leaves[0];
 } else {
  return tree_0_leaves[1];
 }
}

static int flint_ge(int64_t x, int64_t y) {
 return (x >= y) ^ (x < 0 && y < 0 && x != y);
}

int predict_ensemble(const void *pX, double *scores) {
 const double *leaf;
 int c, best = 0;
 int64_t best_bits, bits;
 for(c = 0; c < 2; ++c) scores[c] = 0.0;
 leaf = tree_0(pX);
 for(c = 0; c < 2; ++c) scores[c] += leaf[c];
 memcpy(&best_bits, &scores[0], sizeof best_bits);
 for(c = 1; c < 2; ++c){
  memcpy(&bits, &scores[c], sizeof bits);
  if(!flint_ge(best_bits, bits)){
   best = c;
   best_bits = bits;
  }
 }
 return best;
}
