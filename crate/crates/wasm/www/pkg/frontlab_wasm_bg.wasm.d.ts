/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_run_free: (a: number, b: number) => void;
export const __wbg_semiwave_free: (a: number, b: number) => void;
export const run_h: (a: number) => [number, number];
export const run_t: (a: number) => [number, number];
export const run_u: (a: number) => [number, number];
export const run_verdict: (a: number) => [number, number];
export const run_x: (a: number) => [number, number];
export const semiwave: (a: number, b: number, c: number, d: number) => [number, number, number];
export const semiwave_c_star: (a: number) => number;
export const semiwave_q: (a: number) => [number, number];
export const semiwave_z: (a: number) => [number, number];
export const simulate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const xi0: (a: number, b: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
