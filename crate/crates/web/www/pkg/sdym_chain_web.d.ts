/* tslint:disable */
/* eslint-disable */

/**
 * Solver and exact soliton along the first grid row at `t_end`.
 */
export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly exact: Float64Array;
    readonly max_error: number;
    readonly numeric: Float64Array;
    readonly x: Float64Array;
}

export function kp_evolve(nx: number, kappa: number, t_end: number, dt: number): Profile;

/**
 * `[linf, l2]` of the KP residual on the KdV soliton, with `m3`
 * perturbed by the relative amount `corrupt`.
 */
export function kp_soliton_residual(nx: number, kappa: number, corrupt: number): Float64Array;

/**
 * `[max |K - 1/R^2| over the band, integral curvature / 2 pi]`.
 */
export function sphere_curvature(n: number, radius: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly kp_evolve: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly kp_soliton_residual: (a: number, b: number, c: number) => [number, number, number, number];
    readonly profile_exact: (a: number) => [number, number];
    readonly profile_max_error: (a: number) => number;
    readonly profile_numeric: (a: number) => [number, number];
    readonly profile_x: (a: number) => [number, number];
    readonly sphere_curvature: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
