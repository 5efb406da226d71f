package com.minimart.payment;

import lombok.Data;

@Data
public class ItemDto {

    private String id;

    private Double price;
}
