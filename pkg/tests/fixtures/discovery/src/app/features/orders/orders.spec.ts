export const marker = 'src/app/features/orders/orders.spec.ts';
