// Regenerate with: node gen_primitive_equality.js > primitive_equality.tsv
// Each sample is an expression with the same meaning in JavaScript and .plx.
const samples = [
  "undefined", "null", "true", "false", "0", "-0",
  "1", "0 / 0", '""', '"0"', '"1"', '"abc"',
];

console.log("# left\tright\tloose\tstrict");
for (const a of samples) {
  for (const b of samples) {
    const loose = eval(`(${a}) == (${b})`);
    const strict = eval(`(${a}) === (${b})`);
    console.log(`${a}\t${b}\t${loose}\t${strict}`);
  }
}
