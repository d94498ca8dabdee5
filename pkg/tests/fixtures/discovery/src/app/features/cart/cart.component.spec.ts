export const marker = 'src/app/features/cart/cart.component.spec.ts';
