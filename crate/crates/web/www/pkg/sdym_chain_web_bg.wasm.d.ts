/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_profile_free: (a: number, b: number) => void;
export const kp_evolve: (a: number, b: number, c: number, d: number) => [number, number, number];
export const kp_soliton_residual: (a: number, b: number, c: number) => [number, number, number, number];
export const profile_exact: (a: number) => [number, number];
export const profile_max_error: (a: number) => number;
export const profile_numeric: (a: number) => [number, number];
export const profile_x: (a: number) => [number, number];
export const sphere_curvature: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
